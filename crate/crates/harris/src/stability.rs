//! Divisibility and stability structure, checked numerically.
//!
//! The workhorse is a truncated formal power series over `f64`. Taking the
//! `n`-th root of a generating function (divisibility) or dividing two
//! generating functions (self-decomposability) produces candidate
//! coefficient sequences; the law in question has the claimed property
//! exactly when those coefficients are nonnegative, so the checks reduce
//! to a minimum-coefficient scan with a small floor (`-1e-9`) absorbing
//! truncated-arithmetic roundoff.
//!
//! Self-decomposability is a lattice-scale notion here: the origin-zero
//! law is examined through its lattice count (the value divided by the
//! spacing `k`), whose generating function is `(m - (m-1)z)^(-1/k)`.
//! Shrinking the count by `c` keeps the factor's coefficients nonnegative
//! for every `c` in `(0, 1)`; shrinking the raw value scale instead mixes
//! off-lattice atoms into the divisor and manufactures negative
//! coefficients for every `k >= 2` (see the negative-control test), so the
//! count scale is the one on which the property genuinely lives. The
//! origin-one variant has no mass at zero, which already rules the
//! property out, and is reported as such.

use crate::dist::{Harris, Variant};
use crate::numerics::reg_inc_gamma;
use crate::sampling::{gamma_variate, sample_nb, RngStream};
use crate::{Error, Result};

/// Floor below which a "nonnegative" coefficient counts as genuinely
/// negative; sits far above f64 roundoff at order 60 and far below any
/// real negative mass.
pub const COEFF_FLOOR: f64 = -1e-9;

/// Truncated power series: `coeffs[j]` multiplies `s^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<f64>,
}

impl PowerSeries {
    /// Wraps a coefficient vector.
    ///
    /// # Errors
    /// `Domain` when the vector is empty or holds a non-finite entry.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain(
                "a power series needs at least one coefficient",
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("power series coefficients must be finite"));
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Truncation order (largest retained power).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn min_coeff(&self) -> f64 {
        self.coeffs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    /// Product, truncated to the larger of the two orders.
    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Coefficient-wise logarithm: the series `L` with `exp(L) = self`.
    ///
    /// # Errors
    /// `ZeroConstantTerm` unless the constant term is strictly positive.
    pub fn log(&self) -> Result<PowerSeries> {
        let a = &self.coeffs;
        if a[0] <= 0.0 {
            return Err(Error::ZeroConstantTerm);
        }
        let mut l = vec![0.0; a.len()];
        l[0] = a[0].ln();
        for n in 1..a.len() {
            let mut conv = 0.0;
            for j in 1..n {
                conv += j as f64 * l[j] * a[n - j];
            }
            l[n] = (a[n] - conv / n as f64) / a[0];
        }
        Ok(PowerSeries { coeffs: l })
    }

    /// Coefficient-wise exponential.
    pub fn exp(&self) -> PowerSeries {
        let a = &self.coeffs;
        let mut b = vec![0.0; a.len()];
        b[0] = a[0].exp();
        for n in 1..a.len() {
            let mut conv = 0.0;
            for j in 1..=n {
                conv += j as f64 * a[j] * b[n - j];
            }
            b[n] = conv / n as f64;
        }
        PowerSeries { coeffs: b }
    }

    /// Real power by the Miller recurrence (exact one-pass formula, no
    /// log/exp detour).
    ///
    /// # Errors
    /// `ZeroConstantTerm` unless the constant term is strictly positive.
    pub fn pow(&self, alpha: f64) -> Result<PowerSeries> {
        let a = &self.coeffs;
        if a[0] <= 0.0 {
            return Err(Error::ZeroConstantTerm);
        }
        let mut p = vec![0.0; a.len()];
        p[0] = a[0].powf(alpha);
        for n in 1..a.len() {
            let mut conv = 0.0;
            for j in 1..=n {
                conv += ((alpha + 1.0) * j as f64 - n as f64) * a[j] * p[n - j];
            }
            p[n] = conv / (n as f64 * a[0]);
        }
        Ok(PowerSeries { coeffs: p })
    }

    /// Quotient, computed as multiplication by `exp(-log(divisor))`; long
    /// division is unstable when the divisor's leading coefficients are
    /// small.
    ///
    /// # Errors
    /// `ZeroConstantTerm` unless the divisor's constant term is strictly
    /// positive.
    pub fn div(&self, divisor: &PowerSeries) -> Result<PowerSeries> {
        let mut neg_log = divisor.log()?;
        for c in &mut neg_log.coeffs {
            *c = -*c;
        }
        Ok(self.mul(&neg_log.exp()))
    }
}

/// Generating-function coefficients of a distribution up to `s^order`:
/// the probability mass sits at the lattice positions, zeros elsewhere.
pub fn pgf_series(dist: &Harris, order: usize) -> PowerSeries {
    let mut coeffs = vec![0.0; order + 1];
    let origin = dist.origin() as usize;
    let k = dist.k() as usize;
    let mut r = 0u64;
    let mut pos = origin;
    while pos <= order {
        coeffs[pos] = dist.pmf(r);
        r += 1;
        pos += k;
    }
    PowerSeries { coeffs }
}

/// Outcome of a coefficient-nonnegativity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCheck {
    pub passed: bool,
    pub min_coeff: f64,
}

impl RootCheck {
    fn from_series(ps: &PowerSeries) -> Self {
        let min_coeff = ps.min_coeff();
        RootCheck {
            passed: min_coeff >= COEFF_FLOOR,
            min_coeff,
        }
    }
}

/// Infinite-divisibility check: the `n`-th root of the generating function
/// must again have nonnegative coefficients.
///
/// The root is taken of the origin-zero sibling's series for either
/// variant; the origin-one law is that series shifted by a deterministic
/// unit, which cannot affect divisibility of the random part.
///
/// # Errors
/// `Domain` for `n < 2`.
pub fn id_check(dist: &Harris, n: u32, order: usize) -> Result<RootCheck> {
    if n < 2 {
        return Err(Error::Domain("divisibility order n must be at least 2"));
    }
    let base = Harris::new(dist.m(), dist.k(), Variant::H0).expect("same parameters revalidate");
    let root = pgf_series(&base, order).pow(1.0 / f64::from(n))?;
    Ok(RootCheck::from_series(&root))
}

/// Outcome of a self-decomposability check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SdCheck {
    /// The candidate factor's coefficient scan (origin-zero laws).
    Factor(RootCheck),
    /// Origin-one laws put no mass at zero, which self-decomposability
    /// requires; the check fails by necessity.
    NoMassAtOrigin,
}

impl SdCheck {
    pub fn passed(&self) -> bool {
        match self {
            SdCheck::Factor(rc) => rc.passed,
            SdCheck::NoMassAtOrigin => false,
        }
    }
}

/// Self-decomposability check at shrink factor `c`.
///
/// For the origin-zero law the lattice count `Y = X/k` has generating
/// function `G(z) = (m - (m-1)z)^(-1/k)`; the candidate factor is
/// `Q_c(z) = G(z) / G(1 - c + cz)`, whose denominator is the linear base
/// `[m - (m-1)(1-c), -(m-1)c]` raised to `-1/k`. `Q_c` must have
/// nonnegative coefficients for the law to be self-decomposable. For the
/// origin-one law the check reports failure by necessity (no mass at the
/// origin).
///
/// # Errors
/// `Domain` unless `c` lies strictly inside `(0, 1)`.
pub fn sd_check(dist: &Harris, c: f64, order: usize) -> Result<SdCheck> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain("shrink factor c must lie in (0, 1)"));
    }
    if dist.variant() == Variant::H1 {
        return Ok(SdCheck::NoMassAtOrigin);
    }
    let m = dist.m();
    let shape = dist.shape();
    // dense count-scale series: coefficient r is the mass of the r-th point
    let counts = PowerSeries {
        coeffs: (0..=order as u64).map(|r| dist.pmf(r)).collect(),
    };
    let mut base = vec![0.0; order + 1];
    base[0] = m - (m - 1.0) * (1.0 - c);
    base[1] = -(m - 1.0) * c;
    let divisor = PowerSeries { coeffs: base }.pow(-shape)?;
    let factor = counts.div(&divisor)?;
    Ok(SdCheck::Factor(RootCheck::from_series(&factor)))
}

/// Exact stability identity of the gamma law under random summation
/// driven by this family: composing the gamma Laplace transform
/// `(1+ct)^(-1/k)` with the origin-one generating function at mean `a`
/// lands back on a gamma transform with scale `ac`. Returns the largest
/// absolute residual over the `t` grid; algebraically the identity is
/// exact, so anything above f64 noise is a defect.
///
/// # Errors
/// `Domain` unless `a > 1`, `c > 0`, and every grid point is nonnegative.
pub fn gamma_harris_identity(a: f64, c: f64, k: u64, t_grid: &[f64]) -> Result<f64> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::Domain("gamma identity needs a > 1"));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain("gamma identity needs c > 0"));
    }
    let dist = Harris::h1(a, k)?;
    let shape = dist.shape();
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain("gamma identity grid points must be >= 0"));
        }
        let inner = (1.0 + c * t).powf(-shape);
        let lhs = dist.pgf(inner)?;
        let rhs = (1.0 + a * c * t).powf(-shape);
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Findings of the large-mean limit check; see [`limit_law_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct LimitLawReport {
    pub a_grid: Vec<f64>,
    /// Generating function strictly decreases in `a` at every probe point.
    pub pgf_decreasing: bool,
    /// Per `a`: sample mean of `X/a` (limit value 1).
    pub mean_rescaled: Vec<f64>,
    /// Per `a`: sample variance of `X/a` (limit value `k`).
    pub var_rescaled: Vec<f64>,
    /// Per `a`: sup over the `t` probes of the gap between the empirical
    /// Laplace transform of `X/a` and the limit `(1+kt)^(-1/k)`.
    pub lt_sup_distance: Vec<f64>,
    /// The transform gap at the largest `a` is smaller than at the
    /// smallest.
    pub lt_shrinks: bool,
    /// Kolmogorov distance of `X/a` at the largest `a` against the limit
    /// gamma law (shape `1/k`, scale `k`). Crisp for `k = 1`; for larger
    /// `k` the limit density diverges at zero, so lattice discretization
    /// adds an O(a^(-1/2))-scale contribution.
    pub ks_limit: f64,
}

const LT_PROBES: [f64; 6] = [0.1, 0.25, 0.5, 1.0, 2.0, 5.0];

/// Verifies the large-`a` behavior of the origin-one family: the
/// generating function dies pointwise, and `X/a` converges to the gamma
/// law with Laplace transform `(1+kt)^(-1/k)`, checked through sample
/// moments, empirical transforms, and a Kolmogorov distance.
///
/// # Errors
/// `Domain` unless the grid is strictly increasing with every `a > 1` and
/// `n >= 10000` (Monte Carlo bands assume it).
pub fn limit_law_check(
    a_grid: &[f64],
    k: u64,
    n: usize,
    rng: &mut RngStream,
) -> Result<LimitLawReport> {
    if a_grid.len() < 2 || a_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain(
            "a grid must be strictly increasing with length >= 2",
        ));
    }
    if !(a_grid[0] > 1.0) {
        return Err(Error::Domain("every a must exceed 1"));
    }
    if n < 10_000 {
        return Err(Error::Domain("limit check needs n >= 10000"));
    }
    let shape = 1.0 / k as f64;

    let mut pgf_decreasing = true;
    for tenth in 1..=9 {
        let s = f64::from(tenth) / 10.0;
        let mut prev = f64::INFINITY;
        for &a in a_grid {
            let val = Harris::h1(a, k)?.pgf(s)?;
            if val >= prev {
                pgf_decreasing = false;
            }
            prev = val;
        }
    }

    let mut mean_rescaled = Vec::with_capacity(a_grid.len());
    let mut var_rescaled = Vec::with_capacity(a_grid.len());
    let mut lt_sup_distance = Vec::with_capacity(a_grid.len());
    let mut last_scaled: Vec<f64> = Vec::new();
    for &a in a_grid {
        let dist = Harris::h1(a, k)?;
        let scaled: Vec<f64> = sample_nb(&dist, rng, n)
            .into_iter()
            .map(|x| x as f64 / a)
            .collect();
        let nf = n as f64;
        let mean = scaled.iter().sum::<f64>() / nf;
        let var = scaled.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / (nf - 1.0);
        let sup = LT_PROBES
            .iter()
            .map(|&t| {
                let emp = scaled.iter().map(|w| (-t * w).exp()).sum::<f64>() / nf;
                (emp - (1.0 + k as f64 * t).powf(-shape)).abs()
            })
            .fold(0.0f64, f64::max);
        mean_rescaled.push(mean);
        var_rescaled.push(var);
        lt_sup_distance.push(sup);
        last_scaled = scaled;
    }
    let ks_limit = crate::gof::ks_distance(&last_scaled, |w| {
        if w <= 0.0 {
            0.0
        } else {
            reg_inc_gamma(shape, w / k as f64).expect("gamma arguments valid")
        }
    });
    let lt_shrinks = match (lt_sup_distance.first(), lt_sup_distance.last()) {
        (Some(first), Some(last)) => last < first,
        _ => false,
    };
    Ok(LimitLawReport {
        a_grid: a_grid.to_vec(),
        pgf_decreasing,
        lt_shrinks,
        mean_rescaled,
        var_rescaled,
        lt_sup_distance,
        ks_limit,
    })
}

/// Findings of the random-sum demonstration; see [`stopped_sum_demo`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppedSumReport {
    pub n: usize,
    /// Kolmogorov distance between the simulated sums and the exact gamma
    /// target (shape `1/k`, scale `ac`).
    pub ks_distance: f64,
    pub sample_mean: f64,
    pub target_mean: f64,
}

/// Simulates the stability identity: a sum of `N` independent gamma
/// variates (shape `1/k`, scale `c`), with `N` drawn from the origin-one
/// law at mean `a`, is again gamma with shape `1/k` and scale `ac` —
/// exactly, at finite `a`. Returns `None` for `n = 0`.
///
/// # Errors
/// `Domain` unless `a > 1` and `c > 0`.
pub fn stopped_sum_demo(
    a: f64,
    c: f64,
    k: u64,
    n: usize,
    rng: &mut RngStream,
) -> Result<Option<StoppedSumReport>> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::Domain("stopped sum needs a > 1"));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain("stopped sum needs c > 0"));
    }
    if n == 0 {
        return Ok(None);
    }
    let dist = Harris::h1(a, k)?;
    let shape = dist.shape();
    let mut sums = Vec::with_capacity(n);
    for count in sample_nb(&dist, rng, n) {
        let mut s = 0.0;
        for _ in 0..count {
            s += gamma_variate(rng, shape, c);
        }
        sums.push(s);
    }
    let sample_mean = sums.iter().sum::<f64>() / n as f64;
    let ks = crate::gof::ks_distance(&sums, |x| {
        if x <= 0.0 {
            0.0
        } else {
            reg_inc_gamma(shape, x / (a * c)).expect("gamma arguments valid")
        }
    });
    Ok(Some(StoppedSumReport {
        n,
        ks_distance: ks,
        sample_mean,
        target_mean: a * c * shape,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn construction_guards() {
        assert!(PowerSeries::new(vec![]).is_err());
        assert!(PowerSeries::new(vec![1.0, f64::NAN]).is_err());
        let ps = PowerSeries::new(vec![2.0, 1.0]).unwrap();
        assert_eq!(ps.order(), 1);
        assert_eq!(ps.eval(3.0), 5.0);
    }

    #[test]
    fn log_exp_roundtrip_on_a_generating_function() {
        let ps = pgf_series(&Harris::h0(2.0, 2).unwrap(), 40);
        let back = ps.log().unwrap().exp();
        for (a, b) in ps.coeffs().iter().zip(back.coeffs().iter()) {
            assert!(close(*a, *b, 1e-10), "{a} vs {b}");
        }
    }

    #[test]
    fn pow_identities() {
        let ps = pgf_series(&Harris::h0(2.0, 2).unwrap(), 30);
        let same = ps.pow(1.0).unwrap();
        for (a, b) in ps.coeffs().iter().zip(same.coeffs().iter()) {
            assert!(close(*a, *b, 1e-12));
        }
        let one = ps.pow(0.0).unwrap();
        assert_eq!(one.coeffs()[0], 1.0);
        assert!(one.coeffs()[1..].iter().all(|&c| c.abs() < 1e-14));
        // half power squared returns the original
        let again = ps.pow(0.5).unwrap().pow(2.0).unwrap();
        for (a, b) in ps.coeffs().iter().zip(again.coeffs().iter()) {
            assert!(close(*a, *b, 1e-9));
        }
    }

    #[test]
    fn squaring_matches_direct_convolution() {
        let ps = pgf_series(&Harris::h0(2.0, 1).unwrap(), 25);
        let powed = ps.pow(2.0).unwrap();
        let conv = ps.mul(&ps);
        for (a, b) in powed.coeffs().iter().zip(conv.coeffs().iter()) {
            assert!(close(*a, *b, 1e-12));
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let ps = pgf_series(&Harris::h0(3.0, 2).unwrap(), 30);
        let unit = ps.div(&ps).unwrap();
        assert!(close(unit.coeffs()[0], 1.0, 1e-12));
        assert!(unit.coeffs()[1..].iter().all(|&c| c.abs() < 1e-10));
        let h1 = pgf_series(&Harris::h1(3.0, 2).unwrap(), 30);
        assert!(matches!(ps.div(&h1), Err(Error::ZeroConstantTerm)));
        assert!(matches!(h1.log(), Err(Error::ZeroConstantTerm)));
        assert!(matches!(h1.pow(0.5), Err(Error::ZeroConstantTerm)));
    }

    #[test]
    fn series_places_masses_on_the_lattice() {
        let ps = pgf_series(&Harris::h1(2.0, 2).unwrap(), 5);
        let want = [
            0.0,
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
            0.176777,
            0.0,
            0.066291,
        ];
        for (i, w) in want.iter().enumerate() {
            if *w == 0.0 {
                assert_eq!(ps.coeffs()[i], 0.0, "index {i} must be exactly zero");
            } else {
                assert!(close(ps.coeffs()[i], *w, 5e-7), "index {i}");
            }
        }
        let ps0 = pgf_series(&Harris::h0(2.0, 2).unwrap(), 4);
        assert!(close(
            ps0.coeffs()[0],
            std::f64::consts::FRAC_1_SQRT_2,
            5e-7
        ));
        assert!(close(ps0.coeffs()[4], 0.066291, 5e-7));
        // generating-function invariants: sub-unit total, nonnegative
        let total: f64 = ps.coeffs().iter().sum();
        assert!(total <= 1.0 + 1e-9);
        assert!(ps.min_coeff() >= 0.0);
    }

    #[test]
    fn two_point_law_fails_the_root_test() {
        // (1/2 + s^2/2)^(1/2) develops a negative s^4 coefficient: the
        // canonical non-divisible control
        let mut coeffs = vec![0.0; 7];
        coeffs[0] = 0.5;
        coeffs[2] = 0.5;
        let root = PowerSeries::new(coeffs).unwrap().pow(0.5).unwrap();
        assert!(close(root.coeffs()[4], -0.088388347648318441, 1e-15));
        assert!(root.min_coeff() < COEFF_FLOOR);
    }

    #[test]
    fn divisibility_holds_across_orders_and_variants() {
        let checks = [
            (Harris::h0(2.0, 2).unwrap(), 2u32, 50usize),
            (Harris::h0(10.0, 5).unwrap(), 7, 60),
            (Harris::h1(2.0, 2).unwrap(), 2, 50),
            (Harris::h0(1.25, 1).unwrap(), 3, 60),
        ];
        for (dist, n, order) in checks {
            let rc = id_check(&dist, n, order).unwrap();
            assert!(rc.passed, "n={n}: min {}", rc.min_coeff);
        }
        assert!(id_check(&Harris::h0(2.0, 2).unwrap(), 1, 10).is_err());
    }

    #[test]
    fn self_decomposability_of_the_origin_zero_law() {
        let d = Harris::h0(5.0, 3).unwrap();
        for tenth in 1..=9 {
            let c = f64::from(tenth) / 10.0;
            let check = sd_check(&d, c, 40).unwrap();
            assert!(check.passed(), "c={c}: {check:?}");
        }
        let e = Harris::h0(2.0, 2).unwrap();
        assert!(sd_check(&e, 0.5, 40).unwrap().passed());
        assert!(sd_check(&e, 0.0, 40).is_err());
        assert!(sd_check(&e, 1.0, 40).is_err());
    }

    #[test]
    fn origin_one_law_fails_by_necessity() {
        let d = Harris::h1(2.0, 2).unwrap();
        let check = sd_check(&d, 0.3, 40).unwrap();
        assert_eq!(check, SdCheck::NoMassAtOrigin);
        assert!(!check.passed());
    }

    #[test]
    fn raw_value_scale_is_the_wrong_scale_for_self_decomposability() {
        // Dividing the raw generating function by its c-shrunk composition
        // goes negative for k >= 2 even though the count-scale factor is a
        // genuine mass function: the shrink map mixes off-lattice atoms.
        let d = Harris::h0(1.25, 2).unwrap();
        let c = 0.1;
        let m = d.m();
        let order = 40;
        let num = pgf_series(&d, order);
        let mut base = vec![0.0; order + 1];
        base[0] = m - (m - 1.0) * (1.0 - c) * (1.0 - c);
        base[1] = -2.0 * (m - 1.0) * (1.0 - c) * c;
        base[2] = -(m - 1.0) * c * c;
        let divisor = PowerSeries::new(base).unwrap().pow(-d.shape()).unwrap();
        let literal = num.div(&divisor).unwrap();
        assert!(
            literal.min_coeff() < -1e-2,
            "expected a clearly negative coefficient, got {}",
            literal.min_coeff()
        );
    }

    #[test]
    fn gamma_identity_reference_points() {
        // (a,c,k,t) = (2,1,2,1): both sides are 3^(-1/2)
        let d = Harris::h1(2.0, 2).unwrap();
        let lhs = d.pgf((1.0f64 + 1.0).powf(-0.5)).unwrap();
        assert!(close(lhs, 0.57735026918962576, 1e-15));
        let res = gamma_harris_identity(2.0, 1.0, 2, &[0.0, 1.0]).unwrap();
        assert!(res <= 1e-12, "residual {res}");
        // reciprocal case a = 1/c
        let res = gamma_harris_identity(2.0, 0.5, 3, &[0.0, 0.5, 1.0, 2.0, 5.0]).unwrap();
        assert!(res <= 1e-12, "residual {res}");
        assert!(gamma_harris_identity(1.0, 1.0, 2, &[1.0]).is_err());
        assert!(gamma_harris_identity(2.0, 0.0, 2, &[1.0]).is_err());
        assert!(gamma_harris_identity(2.0, 1.0, 2, &[-1.0]).is_err());
    }

    #[test]
    fn limit_law_smoke() {
        let mut rng = RngStream::new(404, 0);
        let report = limit_law_check(&[10.0, 100.0, 1000.0], 2, 10_000, &mut rng).unwrap();
        assert!(report.pgf_decreasing);
        assert!(report.lt_shrinks, "{:?}", report.lt_sup_distance);
        let last_mean = *report.mean_rescaled.last().unwrap();
        assert!(close(last_mean, 1.0, 0.06), "mean {last_mean}");
        let last_var = *report.var_rescaled.last().unwrap();
        assert!(close(last_var, 2.0, 0.5), "var {last_var}");
        // guards
        assert!(limit_law_check(&[10.0], 2, 10_000, &mut rng).is_err());
        assert!(limit_law_check(&[10.0, 5.0], 2, 10_000, &mut rng).is_err());
        assert!(limit_law_check(&[10.0, 100.0], 2, 100, &mut rng).is_err());
    }

    #[test]
    fn limit_law_exponential_case() {
        // k = 1: the limit is a unit exponential and the lattice is fine
        // enough for a crisp Kolmogorov comparison
        let mut rng = RngStream::new(405, 0);
        let report = limit_law_check(&[100.0, 1000.0], 1, 100_000, &mut rng).unwrap();
        assert!(report.ks_limit <= 0.01, "ks {}", report.ks_limit);
    }

    #[test]
    fn stopped_sum_matches_gamma_target() {
        let mut rng = RngStream::new(406, 0);
        let report = stopped_sum_demo(2.0, 1.0, 2, 10_000, &mut rng)
            .unwrap()
            .expect("nonzero n");
        assert!(report.ks_distance <= 0.03, "ks {}", report.ks_distance);
        assert!(close(report.sample_mean, report.target_mean, 0.1));
        assert_eq!(report.target_mean, 1.0);
        // geometric number of exponentials is exponential again
        let report = stopped_sum_demo(2.0, 0.7, 1, 10_000, &mut rng)
            .unwrap()
            .expect("nonzero n");
        assert!(report.ks_distance <= 0.03, "ks {}", report.ks_distance);
        // guards and the empty case
        assert!(stopped_sum_demo(2.0, 1.0, 2, 0, &mut rng)
            .unwrap()
            .is_none());
        assert!(stopped_sum_demo(1.0, 1.0, 2, 10, &mut rng).is_err());
        assert!(stopped_sum_demo(2.0, -1.0, 2, 10, &mut rng).is_err());
    }
}
