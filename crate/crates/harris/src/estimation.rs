//! Parameter estimation from observed lattice samples.
//!
//! Two estimators for `(m, k)`:
//!
//! * method of moments: `m_hat` is the sample mean (on the unit-origin
//!   scale) and `k_hat = s^2 / (m_hat (m_hat - 1))` inverts the closed-form
//!   variance;
//! * maximum likelihood: `m_hat` is again the sample mean (the likelihood
//!   profile in `m` is closed-form), while the shape is found by solving
//!   the profile score in `K = 1/k`,
//!
//!   ```text
//!   score(K) = sum_i [psi(K x_i) - psi(K)] + n ln(1/xbar)
//!   ```
//!
//!   which decreases from +inf at K -> 0 to `n (mean log - log mean) < 0`
//!   as K -> inf, so a sign change is bracketed and bisection is exact
//!   enough. `k` is reported both as the continuous `1/K_hat` and rounded
//!   to the nearest positive integer.
//!
//! Origin-zero samples are shifted up by one internally so both variants
//! estimate the same `(m, k)` parameterization.

use crate::dist::Variant;
use crate::numerics::{digamma_unchecked, Tolerance};
use crate::{Error, Result};

/// An observed sample of lattice values tied to a support origin.
///
/// Values are stored sorted, which makes every estimator invariant under
/// permutation of the input (floating-point sums are evaluated in a fixed
/// order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    values: Vec<u64>,
    variant: Variant,
    inferred_k: Option<u64>,
}

impl Sample {
    /// Wraps raw observations. The lattice spacing consistent with the
    /// data is inferred as a diagnostic (`None` when every value sits at
    /// the origin, where no spacing is identifiable).
    ///
    /// # Errors
    /// `SampleTooSmall` for an empty sample; `InvalidParameter` if any
    /// value lies below the origin.
    pub fn new(mut values: Vec<u64>, variant: Variant) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SampleTooSmall(0));
        }
        let origin = variant.origin();
        if let Some(&bad) = values.iter().find(|&&v| v < origin) {
            return Err(Error::InvalidParameter(format!(
                "value {bad} lies below the support origin {origin}"
            )));
        }
        values.sort_unstable();
        let inferred_k = infer_lattice(&values, origin).ok();
        Ok(Sample {
            values,
            variant,
            inferred_k,
        })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Lattice spacing consistent with the data, when identifiable.
    pub fn inferred_k(&self) -> Option<u64> {
        self.inferred_k
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Arithmetic mean of the raw values.
    pub fn mean(&self) -> f64 {
        self.values.iter().map(|&v| v as f64).sum::<f64>() / self.len() as f64
    }

    /// Denominator-(n-1) sample variance; NaN for a single observation.
    pub fn variance(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return f64::NAN;
        }
        let mean = self.mean();
        self.values
            .iter()
            .map(|&v| {
                let d = v as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / (n - 1) as f64
    }

    /// Mean after shifting origin-zero data up to the unit-origin scale on
    /// which the `(m, k)` parameterization lives.
    fn unit_mean(&self) -> f64 {
        match self.variant {
            Variant::H1 => self.mean(),
            Variant::H0 => self.mean() + 1.0,
        }
    }

    /// Values on the unit-origin scale.
    fn unit_values(&self) -> impl Iterator<Item = f64> + '_ {
        let shift = 1 - self.variant.origin();
        self.values.iter().map(move |&v| (v + shift) as f64)
    }
}

/// Largest integer lattice consistent with the data: the gcd of the
/// value-origin gaps over values strictly above the origin.
///
/// # Errors
/// `AllAtOrigin` when no value exceeds the origin; `InvalidParameter` if a
/// value lies below it.
pub fn infer_lattice(values: &[u64], origin: u64) -> Result<u64> {
    if let Some(&bad) = values.iter().find(|&&v| v < origin) {
        return Err(Error::InvalidParameter(format!(
            "value {bad} lies below the support origin {origin}"
        )));
    }
    let mut g = 0u64;
    for &v in values {
        if v > origin {
            g = gcd(g, v - origin);
        }
    }
    if g == 0 {
        return Err(Error::AllAtOrigin);
    }
    Ok(g)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Which estimator produced a [`FitResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Moments,
    Mle,
}

/// Root-finder bookkeeping attached to likelihood fits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverDiagnostics {
    /// Bisection iterations performed.
    pub iterations: u32,
    /// Final bracket around the root, in the solver variable `K = 1/k`.
    pub bracket: (f64, f64),
    /// `|score|` at the returned root.
    pub residual: f64,
}

/// Point estimates of `(m, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub method: Method,
    pub m_hat: f64,
    /// Continuous spacing estimate.
    pub k_hat: f64,
    /// `k_hat` rounded to the nearest integer, floored at 1.
    pub k_hat_int: u64,
    /// Present for likelihood fits only.
    pub solver: Option<SolverDiagnostics>,
}

fn round_spacing(k_hat: f64) -> u64 {
    (k_hat.round() as i64).max(1) as u64
}

/// Profile likelihood score in the inverse spacing `K = 1/k`:
/// `sum_i [psi(K x_i) - psi(K)] + n ln(1/xbar)`, with `x_i` and `xbar` on
/// the unit-origin scale. A root in `K` is the likelihood equation for the
/// spacing with the mean profiled out at `m_hat = xbar`.
///
/// When every `K (x_i - 1)` is a nonnegative integer the digamma
/// difference collapses to the finite harmonic sum
/// `1/K + 1/(K+1) + ... + 1/(K + r_i - 1)`.
///
/// # Errors
/// `Domain` unless `K > 0`.
pub fn mle_score(sample: &Sample, big_k: f64) -> Result<f64> {
    if !(big_k > 0.0) || !big_k.is_finite() {
        return Err(Error::Domain("score needs K > 0"));
    }
    let n = sample.len() as f64;
    let psi_k = digamma_unchecked(big_k);
    let sum: f64 = sample
        .unit_values()
        .map(|x| digamma_unchecked(big_k * x) - psi_k)
        .sum();
    Ok(sum - n * sample.unit_mean().ln())
}

/// Maximum likelihood fit.
///
/// `m_hat` is the unit-scale sample mean in closed form. `K_hat` is the
/// root of [`mle_score`], located by scanning a log-spaced grid over
/// `[1e-6, 1e6]` for sign changes and bisecting; the scan doubles as a
/// multiplicity check.
///
/// # Errors
/// `SampleTooSmall` below two observations; `DegenerateSample` when all
/// values coincide; `NoRootInBracket` if the score never changes sign over
/// the bracket; `AmbiguousRoot` if it changes sign more than once.
pub fn fit_mle(sample: &Sample, tol: Tolerance) -> Result<FitResult> {
    if sample.len() < 2 {
        return Err(Error::SampleTooSmall(sample.len()));
    }
    if sample.values.iter().all(|&v| v == sample.values[0]) {
        return Err(Error::DegenerateSample);
    }
    let mean = sample.unit_mean();
    if mean <= 1.0 {
        return Err(Error::MeanAtBoundary(mean));
    }

    // sign-change scan over twelve decades, ten points per decade
    const LO: f64 = 1e-6;
    const HI: f64 = 1e6;
    let points = 121usize;
    let step = (HI / LO).powf(1.0 / (points - 1) as f64);
    let mut grid_k = LO;
    let mut prev = mle_score(sample, grid_k)?;
    let (score_lo, mut score_hi) = (prev, prev);
    let mut brackets: Vec<(f64, f64)> = Vec::new();
    for _ in 1..points {
        let next_k = grid_k * step;
        let next = mle_score(sample, next_k)?;
        if prev == 0.0 {
            brackets.push((grid_k, grid_k));
        } else if prev * next < 0.0 {
            brackets.push((grid_k, next_k));
        }
        grid_k = next_k;
        prev = next;
        score_hi = next;
    }
    if prev == 0.0 {
        brackets.push((grid_k, grid_k));
    }
    match brackets.len() {
        0 => {
            return Err(Error::NoRootInBracket {
                lo: LO,
                hi: HI,
                score_lo,
                score_hi,
            })
        }
        1 => {}
        count => return Err(Error::AmbiguousRoot(count)),
    }

    let (mut lo, mut hi) = brackets[0];
    let mut iterations = 0u32;
    let mut mid = 0.5 * (lo + hi);
    let mut residual = mle_score(sample, mid)?;
    let mut f_lo = mle_score(sample, lo)?;
    while residual.abs() >= tol.abs && (hi - lo) >= tol.rel * mid && iterations < tol.max_iter {
        if f_lo * residual < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = residual;
        }
        mid = 0.5 * (lo + hi);
        residual = mle_score(sample, mid)?;
        iterations += 1;
    }
    let k_hat = 1.0 / mid;
    Ok(FitResult {
        method: Method::Mle,
        m_hat: mean,
        k_hat,
        k_hat_int: round_spacing(k_hat),
        solver: Some(SolverDiagnostics {
            iterations,
            bracket: (lo, hi),
            residual: residual.abs(),
        }),
    })
}

/// Method-of-moments fit: `m_hat = xbar`, `k_hat = s^2 / (xbar (xbar - 1))`
/// on the unit-origin scale.
///
/// # Errors
/// `SampleTooSmall` below two observations; `DegenerateSample` at zero
/// variance; `MeanAtBoundary` if the mean does not exceed the origin.
pub fn fit_moments(sample: &Sample) -> Result<FitResult> {
    if sample.len() < 2 {
        return Err(Error::SampleTooSmall(sample.len()));
    }
    let variance = sample.variance();
    if variance == 0.0 {
        return Err(Error::DegenerateSample);
    }
    let mean = sample.unit_mean();
    if mean <= 1.0 {
        return Err(Error::MeanAtBoundary(mean));
    }
    let k_hat = variance / (mean * (mean - 1.0));
    Ok(FitResult {
        method: Method::Moments,
        m_hat: mean,
        k_hat,
        k_hat_int: round_spacing(k_hat),
        solver: None,
    })
}
