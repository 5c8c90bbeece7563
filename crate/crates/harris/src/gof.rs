//! Goodness-of-fit machinery for validating the samplers: chi-square tests
//! with tail pooling, and the Kolmogorov sup-distance for continuous
//! targets.

use crate::dist::Harris;
use crate::numerics::reg_inc_gamma;

/// Chi-square test outcome. `dof = 0` (everything pooled into one bin)
/// carries no evidence and reports `p_value = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

fn chi_square_p(statistic: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    1.0 - reg_inc_gamma(dof as f64 / 2.0, statistic / 2.0).expect("chi-square arguments are valid")
}

/// One-sample chi-square of an integer sample against a distribution.
///
/// Observations are bucketed by lattice index; consecutive indices are
/// pooled (from the upper tail down) until every bin's expected count
/// reaches `min_expected`.
pub fn chi_square_gof(sample: &[u64], dist: &Harris, min_expected: f64) -> ChiSquare {
    let n = sample.len();
    if n == 0 {
        return ChiSquare {
            statistic: 0.0,
            dof: 0,
            p_value: 1.0,
        };
    }
    let origin = dist.origin();
    let k = dist.k();
    let max_r = sample
        .iter()
        .map(|&x| (x - origin) / k)
        .max()
        .expect("sample is nonempty");
    let mut observed = vec![0u64; max_r as usize + 2];
    for &x in sample {
        observed[((x - origin) / k) as usize] += 1;
    }
    // expected counts per index, with everything above max_r in the last slot
    let nf = n as f64;
    let mut expected: Vec<f64> = (0..=max_r).map(|r| nf * dist.pmf(r)).collect();
    expected.push(nf * dist.survival(dist.support_point(max_r)));

    // pool consecutive bins until each reaches the expectation floor
    let mut obs_bins = Vec::new();
    let mut exp_bins = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for (o, e) in observed.iter().zip(expected.iter()) {
        o_acc += *o as f64;
        e_acc += *e;
        if e_acc >= min_expected {
            obs_bins.push(o_acc);
            exp_bins.push(e_acc);
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if e_acc > 0.0 || o_acc > 0.0 {
        // fold the ragged remainder into the final bin
        match (obs_bins.last_mut(), exp_bins.last_mut()) {
            (Some(ob), Some(eb)) => {
                *ob += o_acc;
                *eb += e_acc;
            }
            _ => {
                obs_bins.push(o_acc);
                exp_bins.push(e_acc);
            }
        }
    }
    let statistic: f64 = obs_bins
        .iter()
        .zip(exp_bins.iter())
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = obs_bins.len().saturating_sub(1);
    ChiSquare {
        statistic,
        dof,
        p_value: chi_square_p(statistic, dof),
    }
}

/// Two-sample chi-square for integer samples drawn from (putatively) the
/// same law.
///
/// Values are bucketed jointly; consecutive value-sorted bins are pooled
/// until both samples' expected-under-pooling counts reach `min_expected`.
pub fn two_sample_chi_square(a: &[u64], b: &[u64], min_expected: f64) -> ChiSquare {
    if a.is_empty() || b.is_empty() {
        return ChiSquare {
            statistic: 0.0,
            dof: 0,
            p_value: 1.0,
        };
    }
    let mut values: Vec<u64> = a.iter().chain(b.iter()).copied().collect();
    values.sort_unstable();
    values.dedup();
    let index = |x: u64| {
        values
            .binary_search(&x)
            .expect("value present by construction")
    };
    let mut count_a = vec![0.0f64; values.len()];
    let mut count_b = vec![0.0f64; values.len()];
    for &x in a {
        count_a[index(x)] += 1.0;
    }
    for &x in b {
        count_b[index(x)] += 1.0;
    }
    let na: f64 = a.len() as f64;
    let nb: f64 = b.len() as f64;
    let total = na + nb;

    // pool so both sides have enough expected weight
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut acc_a, mut acc_b) = (0.0, 0.0);
    for i in 0..values.len() {
        acc_a += count_a[i];
        acc_b += count_b[i];
        let combined = acc_a + acc_b;
        if combined * na / total >= min_expected && combined * nb / total >= min_expected {
            bins.push((acc_a, acc_b));
            acc_a = 0.0;
            acc_b = 0.0;
        }
    }
    if acc_a + acc_b > 0.0 {
        if let Some(last) = bins.last_mut() {
            last.0 += acc_a;
            last.1 += acc_b;
        } else {
            bins.push((acc_a, acc_b));
        }
    }
    let statistic: f64 = bins
        .iter()
        .map(|&(oa, ob)| {
            let e_a = (oa + ob) * na / total;
            let e_b = (oa + ob) * nb / total;
            (oa - e_a) * (oa - e_a) / e_a + (ob - e_b) * (ob - e_b) / e_b
        })
        .sum();
    let dof = bins.len().saturating_sub(1);
    ChiSquare {
        statistic,
        dof,
        p_value: chi_square_p(statistic, dof),
    }
}

/// Kolmogorov sup-distance between the empirical CDF of `sample` and a
/// target CDF. Checks both one-sided gaps at every jump.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    if sample.is_empty() {
        return 0.0;
    }
    let mut xs: Vec<f64> = sample.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("sample values must be comparable"));
    let n = xs.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        let hi = (i as f64 + 1.0) / n - f;
        let lo = f - i as f64 / n;
        sup = sup.max(hi).max(lo);
    }
    sup
}
