//! Closed-form moments, cumulants, and shape statistics, plus brute-force
//! series oracles used to validate them.
//!
//! For the origin-one variant with parameters `(m, k)` the first four
//! cumulants are polynomial in `m` and `k`:
//!
//! ```text
//! k1 = m
//! k2 = m(m-1)k
//! k3 = m(m-1)(2m-1)k^2
//! k4 = m(m-1)(6m^2-6m+1)k^3
//! ```
//!
//! and each later cumulant follows from `k_{d+1} = k2 * d(k_d)/dm`. Raw,
//! central, and factorial moments are linear reshuffles of these. The
//! origin-zero variant shifts the mean down by one and keeps every central
//! moment.

use crate::dist::{Harris, Variant};
use crate::{Error, Result};

/// First four moments in every common convention, plus shape statistics.
///
/// Arrays index by order minus one, so `raw[2]` is the third raw moment.
/// `central[0]` is identically zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub raw: [f64; 4],
    pub central: [f64; 4],
    pub factorial: [f64; 4],
    pub cumulants: [f64; 4],
    /// Squared skewness, `k3^2 / k2^3`.
    pub beta1: f64,
    /// Skewness, `k3 / k2^(3/2)`.
    pub gamma1: f64,
    /// Kurtosis, `3 + k4 / k2^2`.
    pub beta2: f64,
    /// Excess kurtosis, `k4 / k2^2`.
    pub gamma2: f64,
    /// Coefficient of variation, `sqrt(variance) / mean`.
    pub cv: f64,
}

impl Moments {
    /// Closed-form moments of a distribution.
    pub fn of(dist: &Harris) -> Self {
        let m = dist.m();
        let k = dist.k() as f64;
        let k2 = m * (m - 1.0) * k;
        let k3 = m * (m - 1.0) * (2.0 * m - 1.0) * k * k;
        let k4 = m * (m - 1.0) * (6.0 * m * m - 6.0 * m + 1.0) * k * k * k;
        let mean = match dist.variant() {
            Variant::H1 => m,
            Variant::H0 => m - 1.0,
        };
        let central = [0.0, k2, k3, k4 + 3.0 * k2 * k2];
        let raw = raw_from_central(mean, central);
        Moments {
            raw,
            central,
            factorial: factorial_from_raw(raw),
            cumulants: [mean, k2, k3, k4],
            beta1: k3 * k3 / (k2 * k2 * k2),
            gamma1: k3 / k2.powf(1.5),
            beta2: 3.0 + k4 / (k2 * k2),
            gamma2: k4 / (k2 * k2),
            cv: central[1].sqrt() / mean,
        }
    }

    pub fn mean(&self) -> f64 {
        self.raw[0]
    }

    pub fn variance(&self) -> f64 {
        self.central[1]
    }
}

/// Raw moments through order four from the mean and central moments.
fn raw_from_central(mean: f64, c: [f64; 4]) -> [f64; 4] {
    let m2 = c[1] + mean * mean;
    let m3 = c[2] + 3.0 * mean * c[1] + mean.powi(3);
    let m4 = c[3] + 4.0 * mean * c[2] + 6.0 * mean * mean * c[1] + mean.powi(4);
    [mean, m2, m3, m4]
}

/// Factorial moments through order four from raw moments (Stirling
/// conversion).
fn factorial_from_raw(r: [f64; 4]) -> [f64; 4] {
    [
        r[0],
        r[1] - r[0],
        r[2] - 3.0 * r[1] + 2.0 * r[0],
        r[3] - 6.0 * r[2] + 11.0 * r[1] - 6.0 * r[0],
    ]
}

/// Which moment a series summation should target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    /// `E[X^d]`
    Raw(u32),
    /// `E[(X - EX)^d]`
    Central(u32),
    /// `E[X(X-1)...(X-d+1)]`
    Factorial(u32),
}

/// Brute-force moment by direct summation over the support.
///
/// Completely independent of the closed forms above: masses come from the
/// one-step probability recurrence and the sum is truncated once eight
/// consecutive terms fall below 1e-15 of the accumulated value, which the
/// geometric tail makes safe. Intended as a slow oracle, not for production
/// use.
///
/// # Errors
/// `Domain` for order zero.
pub fn series_moment(dist: &Harris, kind: MomentKind) -> Result<f64> {
    let order = match kind {
        MomentKind::Raw(d) | MomentKind::Central(d) | MomentKind::Factorial(d) => d,
    };
    if order == 0 {
        return Err(Error::Domain("moment order must be at least 1"));
    }
    let center = match kind {
        MomentKind::Central(_) => series_sum(dist, |x| x),
        _ => 0.0,
    };
    Ok(match kind {
        MomentKind::Raw(d) => series_sum(dist, |x| x.powi(d as i32)),
        MomentKind::Central(d) => series_sum(dist, |x| (x - center).powi(d as i32)),
        MomentKind::Factorial(d) => {
            series_sum(dist, |x| (0..d).fold(1.0, |acc, j| acc * (x - j as f64)))
        }
    })
}

fn series_sum<F: Fn(f64) -> f64>(dist: &Harris, g: F) -> f64 {
    let k = dist.k() as f64;
    let q = dist.q();
    let mut mass = dist.pmf(0);
    let mut acc = 0.0;
    let mut quiet = 0u32;
    let mut r = 0u64;
    loop {
        let term = mass * g(dist.support_point(r));
        acc += term;
        if r > 20 && term.abs() <= 1e-15 * (acc.abs() + 1e-300) {
            quiet += 1;
            if quiet >= 8 {
                break;
            }
        } else {
            quiet = 0;
        }
        if r >= 2_000_000 {
            break;
        }
        mass *= (1.0 + r as f64 * k) * q / ((1.0 + r as f64) * k);
        r += 1;
    }
    acc
}

/// Which differential recurrence to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecurrenceKind {
    Raw,
    Central,
    Cumulant,
}

/// Relative residual of the mean-parameter recurrence that generates the
/// moment of order `order + 1` from lower orders:
///
/// ```text
/// raw:      m'_{d+1} = mu * m'_d + k2 * d(m'_d)/dm
/// central:  mu_{d+1} = k2 * (d(mu_d)/dm + d * mu_{d-1})
/// cumulant: k_{d+1}  = k2 * d(k_d)/dm
/// ```
///
/// The `m`-derivative is taken by central difference with step `1e-5 * m`,
/// so the residual floor is O(h^2) relative to the moment scale; it is
/// reported relative to `max(1, |lhs|)`.
///
/// # Errors
/// `Domain` unless `1 <= order <= 3` (closed forms stop at order four);
/// `StepTooLarge` if the difference step would leave the parameter space.
pub fn recurrence_residual(dist: &Harris, order: u32, kind: RecurrenceKind) -> Result<f64> {
    if !(1..=3).contains(&order) {
        return Err(Error::Domain("recurrence order must be 1, 2, or 3"));
    }
    let m = dist.m();
    let h = 1e-5 * m;
    if m - h <= 1.0 {
        return Err(Error::StepTooLarge {
            h,
            remaining: m - 1.0,
        });
    }
    let at =
        |mu: f64| Harris::new(mu, dist.k(), dist.variant()).expect("perturbed m stays above 1");
    let idx = (order - 1) as usize;
    let here = Moments::of(dist);
    let k2 = here.cumulants[1];
    let deriv = |pick: &dyn Fn(&Moments) -> f64| {
        (pick(&Moments::of(&at(m + h))) - pick(&Moments::of(&at(m - h)))) / (2.0 * h)
    };
    let (lhs, rhs) = match kind {
        RecurrenceKind::Raw => (
            here.raw[idx + 1],
            here.mean() * here.raw[idx] + k2 * deriv(&|mo: &Moments| mo.raw[idx]),
        ),
        RecurrenceKind::Central => {
            let lower = if order == 1 {
                1.0
            } else {
                here.central[idx - 1]
            };
            (
                here.central[idx + 1],
                k2 * (deriv(&|mo: &Moments| mo.central[idx]) + order as f64 * lower),
            )
        }
        RecurrenceKind::Cumulant => (
            here.cumulants[idx + 1],
            k2 * deriv(&|mo: &Moments| mo.cumulants[idx]),
        ),
    };
    Ok((lhs - rhs).abs() / lhs.abs().max(1.0))
}
