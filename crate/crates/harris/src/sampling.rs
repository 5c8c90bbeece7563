//! Random-variate generation.
//!
//! Three independent constructions of the same law, kept deliberately
//! separate so they can cross-validate each other: the direct negative
//! binomial route, the explicit gamma-Poisson mixture, and inverse-CDF
//! lookup. All draw from [`RngStream`], a counter-based generator with a
//! `(seed, stream_id)` addressing scheme: the same pair always reproduces
//! the same variates, and distinct stream ids give independent streams, so
//! parallel simulation needs no locks.

use crate::dist::Harris;
use crate::numerics::ln_gamma_unchecked;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Deterministic, splittable random source.
///
/// Identical `(seed, stream_id)` pairs produce identical sequences on
/// every platform; distinct stream ids are statistically independent.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha12Rng,
    seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream {
            rng,
            seed,
            stream_id,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform variate on the open interval (0, 1); 53-bit resolution,
    /// never exactly 0 or 1, so logs of it are always finite.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }

    /// Standard normal via the Marsaglia polar method.
    pub(crate) fn normal(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }
}

/// Gamma variate with the given shape and scale.
///
/// Marsaglia-Tsang squeeze for shape >= 1; smaller shapes are boosted to
/// `shape + 1` and corrected by `U^(1/shape)`.
pub(crate) fn gamma_variate(rng: &mut RngStream, shape: f64, scale: f64) -> f64 {
    debug_assert!(shape > 0.0 && scale > 0.0);
    if shape < 1.0 {
        let boost = rng.uniform().powf(1.0 / shape);
        return gamma_variate(rng, shape + 1.0, scale) * boost;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = rng.normal();
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = rng.uniform();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v * scale;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v * scale;
        }
    }
}

/// Poisson variate: multiplication inversion below mean 10, the PTRS
/// transformed-rejection sampler above.
pub(crate) fn poisson_variate(rng: &mut RngStream, lambda: f64) -> u64 {
    debug_assert!(lambda >= 0.0);
    if lambda == 0.0 {
        return 0;
    }
    if lambda < 10.0 {
        let floor = (-lambda).exp();
        let mut prod = 1.0;
        let mut count = 0u64;
        loop {
            prod *= rng.uniform();
            if prod <= floor {
                return count;
            }
            count += 1;
        }
    }
    let b = 0.931 + 2.53 * lambda.sqrt();
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let v_r = 0.9277 - 3.6224 / (b - 2.0);
    let ln_lambda = lambda.ln();
    loop {
        let u = rng.uniform() - 0.5;
        let v = rng.uniform();
        let us = 0.5 - u.abs();
        let kf = ((2.0 * a / us + b) * u + lambda + 0.43).floor();
        if us >= 0.07 && v <= v_r {
            return kf as u64;
        }
        if kf < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = (v * inv_alpha / (a / (us * us) + b)).ln();
        if lhs <= kf * ln_lambda - lambda - ln_gamma_unchecked(kf + 1.0) {
            return kf as u64;
        }
    }
}

/// `n` variates through the negative binomial route: the lattice count is
/// NB with success probability `1/m` and shape `1/k`, drawn by geometric
/// inversion when `k = 1` and by the gamma-Poisson compound otherwise.
pub fn sample_nb(dist: &Harris, rng: &mut RngStream, n: usize) -> Vec<u64> {
    let origin = dist.origin();
    let k = dist.k();
    let m = dist.m();
    let ln_q = dist.q().ln();
    (0..n)
        .map(|_| {
            let count = if k == 1 {
                (rng.uniform().ln() / ln_q) as u64
            } else {
                let lambda = gamma_variate(rng, dist.shape(), m - 1.0);
                poisson_variate(rng, lambda)
            };
            origin + k * count
        })
        .collect()
}

/// `n` variates through the explicit two-stage mixture for every `k`:
/// a gamma intensity with shape `1/k` and scale `m - 1`, then a Poisson
/// count at that intensity.
pub fn sample_gamma_poisson(dist: &Harris, rng: &mut RngStream, n: usize) -> Vec<u64> {
    let origin = dist.origin();
    let k = dist.k();
    let m = dist.m();
    (0..n)
        .map(|_| {
            let lambda = gamma_variate(rng, dist.shape(), m - 1.0);
            origin + k * poisson_variate(rng, lambda)
        })
        .collect()
}

/// `n` variates by inverse-CDF lookup. Exact but O(quantile) per draw;
/// the baseline the fast routes are checked against.
pub fn sample_inverse(dist: &Harris, rng: &mut RngStream, n: usize) -> Vec<u64> {
    (0..n)
        .map(|_| {
            let u = rng.uniform();
            dist.quantile(u).expect("uniform variate lies in (0,1)") as u64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gof::{chi_square_gof, two_sample_chi_square};
    use crate::moments::Moments;

    #[test]
    fn identical_streams_reproduce_identical_sequences() {
        let d = Harris::h1(2.0, 2).unwrap();
        let a = sample_nb(&d, &mut RngStream::new(42, 7), 200);
        let b = sample_nb(&d, &mut RngStream::new(42, 7), 200);
        assert_eq!(a, b);
        let c = sample_nb(&d, &mut RngStream::new(42, 8), 200);
        assert_ne!(a, c);
        let e = sample_nb(&d, &mut RngStream::new(43, 7), 200);
        assert_ne!(a, e);
    }

    #[test]
    fn zero_count_requests_yield_empty_output() {
        let d = Harris::h1(2.0, 2).unwrap();
        let mut rng = RngStream::new(1, 0);
        assert!(sample_nb(&d, &mut rng, 0).is_empty());
        assert!(sample_gamma_poisson(&d, &mut rng, 0).is_empty());
        assert!(sample_inverse(&d, &mut rng, 0).is_empty());
    }

    #[test]
    fn uniform_stays_inside_open_interval() {
        let mut rng = RngStream::new(9, 0);
        for _ in 0..10_000 {
            let u = rng.uniform();
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn all_samplers_respect_the_lattice() {
        for (m, k) in [(2.0, 2u64), (10.0, 5), (1.25, 3)] {
            for (variant, origin) in [
                (Harris::h1(m, k).unwrap(), 1u64),
                (Harris::h0(m, k).unwrap(), 0),
            ] {
                let mut rng = RngStream::new(5, 1);
                for sample in [
                    sample_nb(&variant, &mut rng, 500),
                    sample_gamma_poisson(&variant, &mut rng, 500),
                    sample_inverse(&variant, &mut rng, 500),
                ] {
                    for &x in &sample {
                        assert!(x >= origin);
                        assert_eq!((x - origin) % k, 0, "off-lattice draw {x} for k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn nb_route_mean_sits_in_clt_band() {
        let d = Harris::h1(2.0, 2).unwrap();
        let n = 100_000;
        let xs = sample_nb(&d, &mut RngStream::new(20240801, 0), n);
        let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / n as f64;
        let band = 4.0 * (Moments::of(&d).variance() / n as f64).sqrt();
        assert!(
            (mean - 2.0).abs() <= band,
            "mean {mean} outside 2 +/- {band}"
        );
    }

    #[test]
    fn unit_spacing_reduces_to_geometric() {
        let d = Harris::h1(2.0, 1).unwrap();
        let xs = sample_nb(&d, &mut RngStream::new(11, 0), 100_000);
        let gof = chi_square_gof(&xs, &d, 5.0);
        assert!(gof.p_value > 0.001, "geometric GOF p={}", gof.p_value);
    }

    #[test]
    fn mixture_route_matches_the_leading_mass() {
        let d = Harris::h1(2.0, 2).unwrap();
        let n = 100_000;
        let xs = sample_gamma_poisson(&d, &mut RngStream::new(77, 0), n);
        let at_one = xs.iter().filter(|&&x| x == 1).count() as f64 / n as f64;
        let want = std::f64::consts::FRAC_1_SQRT_2;
        assert!((at_one - want).abs() <= 0.006, "P(X=1) estimate {at_one}");
    }

    #[test]
    fn near_degenerate_mean_puts_mass_at_origin() {
        let d = Harris::h1(1.0001, 2).unwrap();
        let n = 20_000;
        for xs in [
            sample_gamma_poisson(&d, &mut RngStream::new(3, 0), n),
            sample_inverse(&d, &mut RngStream::new(3, 1), n),
        ] {
            let at_origin = xs.iter().filter(|&&x| x == 1).count() as f64 / n as f64;
            assert!(at_origin >= 0.999, "origin mass {at_origin}");
        }
    }

    #[test]
    fn routes_agree_pairwise() {
        let d = Harris::h1(2.0, 2).unwrap();
        let n = 30_000;
        let a = sample_nb(&d, &mut RngStream::new(100, 0), n);
        let b = sample_gamma_poisson(&d, &mut RngStream::new(100, 1), n);
        let c = sample_inverse(&d, &mut RngStream::new(100, 2), n);
        for (x, y, label) in [(&a, &b, "nb/gp"), (&a, &c, "nb/inv"), (&b, &c, "gp/inv")] {
            let t = two_sample_chi_square(x, y, 5.0);
            assert!(t.p_value > 0.001, "{label}: p={}", t.p_value);
        }
    }

    #[test]
    fn inverse_route_passes_gof() {
        let d = Harris::h1(10.0, 5).unwrap();
        let xs = sample_inverse(&d, &mut RngStream::new(6, 0), 30_000);
        let gof = chi_square_gof(&xs, &d, 5.0);
        assert!(gof.p_value > 0.001, "inverse GOF p={}", gof.p_value);
    }

    #[test]
    fn gamma_kernel_moments() {
        // shape 0.5, scale 2: mean 1, variance 2 (exercises the boost path)
        let mut rng = RngStream::new(8, 0);
        let n = 200_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let g = gamma_variate(&mut rng, 0.5, 2.0);
            assert!(g > 0.0);
            s1 += g;
            s2 += g * g;
        }
        let mean = s1 / n as f64;
        let var = s2 / n as f64 - mean * mean;
        assert!((mean - 1.0).abs() < 0.02, "gamma mean {mean}");
        assert!((var - 2.0).abs() < 0.1, "gamma var {var}");
    }

    #[test]
    fn poisson_kernel_moments_both_regimes() {
        let mut rng = RngStream::new(12, 0);
        for lambda in [3.5, 25.0] {
            let n = 200_000;
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let p = poisson_variate(&mut rng, lambda) as f64;
                s1 += p;
                s2 += p * p;
            }
            let mean = s1 / n as f64;
            let var = s2 / n as f64 - mean * mean;
            let band = 4.0 * (lambda / n as f64).sqrt();
            assert!(
                (mean - lambda).abs() <= band,
                "poisson mean {mean} at {lambda}"
            );
            assert!(
                (var / lambda - 1.0).abs() < 0.05,
                "poisson var {var} at {lambda}"
            );
        }
        assert_eq!(poisson_variate(&mut rng, 0.0), 0);
    }
}
