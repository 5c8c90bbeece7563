//! The Harris family of lattice distributions.
//!
//! A variable in this family lives on an arithmetic lattice `{origin,
//! origin + k, origin + 2k, ...}` with integer spacing `k >= 1` and a mean
//! parameter `m > 1`. Writing `p = 1/m` and `q = 1 - p`, the probability of
//! the `r`-th lattice point is
//!
//! ```text
//! P(r) = C(1/k + r - 1, r) * p^(1/k) * q^r
//! ```
//!
//! so the lattice index `r = (X - origin)/k` is negative binomial with
//! success probability `p` and (generally fractional) shape `1/k`. The two
//! variants differ only in the origin: `H1` starts at one, `H0` at zero.
//! `k = 1` collapses both to a geometric law.

use crate::numerics::{self, ln_gamma_unchecked};
use crate::{Error, Result};

/// Support origin selector: `H1` lives on `{1, 1+k, ...}`, `H0` on
/// `{0, k, 2k, ...}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    H0,
    H1,
}

impl Variant {
    /// Smallest support point.
    pub fn origin(self) -> u64 {
        match self {
            Variant::H0 => 0,
            Variant::H1 => 1,
        }
    }
}

/// Negative binomial parameters of the lattice count `(X - origin)/k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbParams {
    /// Success probability, `1/m`.
    pub p: f64,
    /// Shape, `1/k`.
    pub shape: f64,
}

/// A member of the family, identified by `(m, k, variant)`.
///
/// ```
/// use harris::{Harris, Variant};
///
/// let d = Harris::new(2.0, 2, Variant::H1).unwrap();
/// assert!((d.pmf(0) - 0.7071067811865476).abs() < 1e-15);
/// assert!((d.cdf(3.0) - 0.8838834764831844).abs() < 1e-15);
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harris {
    m: f64,
    k: u64,
    variant: Variant,
}

impl Harris {
    /// Builds a distribution with mean parameter `m > 1` and lattice
    /// spacing `k >= 1`.
    ///
    /// # Errors
    /// `InvalidParameter` if `m` is not a finite number greater than one,
    /// or `k` is zero.
    pub fn new(m: f64, k: u64, variant: Variant) -> Result<Self> {
        if !m.is_finite() || m <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "mean parameter must be finite and > 1, got {m}"
            )));
        }
        if k == 0 {
            return Err(Error::InvalidParameter(
                "lattice spacing k must be >= 1".into(),
            ));
        }
        Ok(Harris { m, k, variant })
    }

    /// Convenience constructor for the origin-one variant.
    pub fn h1(m: f64, k: u64) -> Result<Self> {
        Harris::new(m, k, Variant::H1)
    }

    /// Convenience constructor for the origin-zero variant.
    pub fn h0(m: f64, k: u64) -> Result<Self> {
        Harris::new(m, k, Variant::H0)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Success probability `1/m` of the underlying negative binomial.
    pub fn p(&self) -> f64 {
        1.0 / self.m
    }

    /// Failure probability `1 - 1/m`.
    pub fn q(&self) -> f64 {
        1.0 - 1.0 / self.m
    }

    /// Negative binomial shape `1/k`.
    pub fn shape(&self) -> f64 {
        1.0 / self.k as f64
    }

    /// Smallest support point (0 or 1).
    pub fn origin(&self) -> u64 {
        self.variant.origin()
    }

    /// The `r`-th support point, `origin + r * k`.
    pub fn support_point(&self, r: u64) -> f64 {
        (self.origin() + r * self.k) as f64
    }

    /// Probability of the `r`-th support point.
    ///
    /// Direct product below r = 31, log-space beyond; relative accuracy
    /// ~1e-14 either way.
    pub fn pmf(&self, r: u64) -> f64 {
        let a = self.shape();
        let p = self.p();
        let q = self.q();
        if r <= 30 {
            let c = numerics::gen_binom(a, r).expect("shape is positive by construction");
            c * p.powf(a) * q.powf(r as f64)
        } else {
            let lc = numerics::ln_gen_binom(a, r).expect("shape is positive by construction");
            (lc + a * p.ln() + r as f64 * q.ln()).exp()
        }
    }

    /// `(support point, probability)` pairs for `r = 0..=rmax`.
    pub fn pmf_table(&self, rmax: u64) -> Vec<(f64, f64)> {
        (0..=rmax)
            .map(|r| (self.support_point(r), self.pmf(r)))
            .collect()
    }

    /// Distribution function `P(X <= x)`, right-continuous in `x`.
    ///
    /// Evaluates the regularized incomplete beta `I_p(1/k, r + 1)` at the
    /// lattice index `r` below `x`; infinities map to 0 and 1, NaN
    /// propagates.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x < self.origin() as f64 {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        let r = ((x - self.origin() as f64) / self.k as f64).floor();
        numerics::reg_inc_beta(self.p(), self.shape(), r + 1.0)
            .expect("beta arguments valid by construction")
    }

    /// Survival function `P(X > x)`, computed directly as
    /// `I_q(r + 1, 1/k)` rather than `1 - cdf` so small tails keep full
    /// relative accuracy.
    pub fn survival(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x < self.origin() as f64 {
            return 1.0;
        }
        if x == f64::INFINITY {
            return 0.0;
        }
        let r = ((x - self.origin() as f64) / self.k as f64).floor();
        numerics::reg_inc_beta(self.q(), r + 1.0, self.shape())
            .expect("beta arguments valid by construction")
    }

    /// Smallest support point `x` with `cdf(x) >= u` (up to 1e-12 slack
    /// against accumulated roundoff).
    ///
    /// # Errors
    /// `Domain` unless `u` lies in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::Domain("quantile needs u in [0, 1)"));
        }
        let target = u - 1e-12;
        let k = self.k as f64;
        let q = self.q();
        let mut r = 0u64;
        let mut mass = self.pmf(0);
        let mut acc = mass;
        while acc < target && mass > 0.0 {
            // P(r+1)/P(r) = (1 + rk) q / ((1 + r) k)
            mass *= (1.0 + r as f64 * k) * q / ((1.0 + r as f64) * k);
            acc += mass;
            r += 1;
        }
        Ok(self.support_point(r))
    }

    /// Probability generating function `E[s^X]`.
    ///
    /// `H1`: `s * (m - (m-1) s^k)^(-1/k)`; `H0` drops the leading `s`.
    /// Defined for `s >= 0` inside the radius of convergence
    /// `(m/(m-1))^(1/k) > 1`, so the whole of `[0, 1]` is always valid.
    ///
    /// # Errors
    /// `Domain` for negative `s` or `s` at or beyond the radius.
    pub fn pgf(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::Domain("pgf needs finite s >= 0"));
        }
        let base = self.m - (self.m - 1.0) * s.powi(self.k as i32);
        if base <= 0.0 {
            return Err(Error::Domain(
                "pgf argument is outside the radius of convergence",
            ));
        }
        let body = base.powf(-self.shape());
        Ok(match self.variant {
            Variant::H1 => s * body,
            Variant::H0 => body,
        })
    }

    /// Largest `t` (exclusive) at which the moment generating function
    /// converges: `ln(m/(m-1)) / k`.
    pub fn mgf_boundary(&self) -> f64 {
        (self.m / (self.m - 1.0)).ln() / self.k as f64
    }

    /// Moment generating function `E[e^(tX)]`.
    ///
    /// # Errors
    /// `Divergence` for `t` at or beyond [`mgf_boundary`](Self::mgf_boundary).
    pub fn mgf(&self, t: f64) -> Result<f64> {
        Ok(self.cgf(t)?.exp())
    }

    /// Cumulant generating function `ln E[e^(tX)]`.
    ///
    /// # Errors
    /// `Divergence` for `t` at or beyond [`mgf_boundary`](Self::mgf_boundary).
    pub fn cgf(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::Domain("cgf needs finite t"));
        }
        let boundary = self.mgf_boundary();
        if t >= boundary {
            return Err(Error::Divergence { t, boundary });
        }
        let base = self.m - (self.m - 1.0) * (t * self.k as f64).exp();
        Ok(self.origin() as f64 * t - self.shape() * base.ln())
    }

    /// Negative binomial parameters of the lattice count.
    pub fn nb(&self) -> NbParams {
        NbParams {
            p: self.p(),
            shape: self.shape(),
        }
    }

    /// Rebuilds a distribution from negative binomial parameters, checking
    /// that the shape is consistent with the claimed spacing.
    ///
    /// # Errors
    /// `InvalidParameter` if `p` is outside `(0, 1)` or `shape` differs
    /// from `1/k` by more than one part in 1e9.
    pub fn from_nb(nb: NbParams, k: u64, variant: Variant) -> Result<Self> {
        if !(nb.p > 0.0 && nb.p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "success probability must lie in (0, 1), got {}",
                nb.p
            )));
        }
        if k == 0 {
            return Err(Error::InvalidParameter(
                "lattice spacing k must be >= 1".into(),
            ));
        }
        let want = 1.0 / k as f64;
        if !((nb.shape - want).abs() <= 1e-9 * want) {
            return Err(Error::InvalidParameter(format!(
                "shape {} does not match 1/k = {want}",
                nb.shape
            )));
        }
        Harris::new(1.0 / nb.p, k, variant)
    }

    /// Conditional law of one lattice count given that two independent
    /// copies have total count `t`:
    ///
    /// ```text
    /// P(r | t) = C(1/k+r-1, r) C(1/k+t-r-1, t-r) / C(2/k+t-1, t)
    /// ```
    ///
    /// The mean parameter cancels, leaving a symmetric vector of `t + 1`
    /// probabilities that depends on `k` alone.
    pub fn conditional_pmf(&self, t: u64) -> Vec<f64> {
        let a = self.shape();
        let ln_c = |alpha: f64, r: u64| {
            if r == 0 {
                return 0.0;
            }
            ln_gamma_unchecked(alpha + r as f64)
                - ln_gamma_unchecked(alpha)
                - ln_gamma_unchecked(r as f64 + 1.0)
        };
        let denom = ln_c(2.0 * a, t);
        (0..=t)
            .map(|r| (ln_c(a, r) + ln_c(a, t - r) - denom).exp())
            .collect()
    }

    /// Residual of the mean-parameter identity that pins down this family:
    /// the derivative of the survival function past the `n`-th lattice
    /// point with respect to `m` must equal `(nk + 1)/(mk) * pmf(n)`.
    ///
    /// The derivative is taken by central difference with step `h`
    /// (default `1e-5 * m`), so a zero residual is only resolved to O(h^2).
    ///
    /// # Errors
    /// `Domain` for a non-positive step; `StepTooLarge` if `m - h` would
    /// leave the parameter space.
    pub fn characterization_residual(&self, n: u64, h: Option<f64>) -> Result<f64> {
        let h = h.unwrap_or(1e-5 * self.m);
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Domain("step h must be finite and positive"));
        }
        if self.m - h <= 1.0 {
            return Err(Error::StepTooLarge {
                h,
                remaining: self.m - 1.0,
            });
        }
        let a = self.shape();
        let idx = n as f64 + 1.0;
        let surv = |mu: f64| numerics::reg_inc_beta(1.0 - 1.0 / mu, idx, a);
        let deriv = (surv(self.m + h)? - surv(self.m - h)?) / (2.0 * h);
        let k = self.k as f64;
        let target = (n as f64 * k + 1.0) / (self.m * k) * self.pmf(n);
        Ok((deriv - target).abs())
    }
}
