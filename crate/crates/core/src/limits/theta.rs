use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::LimitError;

/// Truncation controls for the alternating series behind `ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    /// Highest series index `j` evaluated (terms `0..=truncation_j`).
    pub truncation_j: usize,
    /// Stop early once two consecutive terms fall below this in absolute value.
    pub term_tolerance: f64,
}

impl Default for DensitySpec {
    fn default() -> Self {
        Self {
            truncation_j: 50,
            term_tolerance: 1e-15,
        }
    }
}

impl DensitySpec {
    pub fn validate(&self) -> Result<(), LimitError> {
        if self.truncation_j < 1 {
            return Err(LimitError::InvalidSpec("truncation_j must be >= 1".into()));
        }
        if !(self.term_tolerance > 0.0) {
            return Err(LimitError::InvalidSpec(
                "term_tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

fn check_psi_domain(x: f64, y: f64) -> Result<(), LimitError> {
    if !(x > 0.0) || !(y >= 0.0) {
        return Err(LimitError::OutOfDomain { x, y });
    }
    Ok(())
}

/// Sums `term(0), term(1), …` up to `spec.truncation_j`, stopping after two
/// consecutive terms below the tolerance.
fn truncated_sum(spec: &DensitySpec, mut term: impl FnMut(usize) -> f64) -> f64 {
    let mut sum = 0.0;
    let mut small = 0;
    for j in 0..=spec.truncation_j {
        let t = term(j);
        sum += t;
        if t.abs() < spec.term_tolerance {
            small += 1;
            if small == 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    sum
}

#[inline]
fn sign(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `j`-th term of `y x^{−3/2} Σ (−1)^j (2j+1) e^{−(2j+1)² y²/(2x)}`.
#[inline]
fn direct_term(x: f64, y: f64, j: usize) -> f64 {
    let odd = (2 * j + 1) as f64;
    sign(j) * y * x.powf(-1.5) * odd * (-0.5 * odd * odd * y * y / x).exp()
}

/// `j`-th term of the Jacobi-transformed series
/// `(π/2)^{3/2} y^{−2} Σ (−1)^j (2j+1) e^{−π²(2j+1)² x/(8y²)}`,
/// evaluated in log space so that tiny `y` cannot produce `∞ · 0`.
#[inline]
fn dual_term(x: f64, y: f64, j: usize) -> f64 {
    let odd = (2 * j + 1) as f64;
    let log_mag =
        1.5 * (PI / 2.0).ln() + odd.ln() - 2.0 * y.ln() - PI * PI * odd * odd * x / (8.0 * y * y);
    sign(j) * log_mag.exp()
}

/// `ψ(x, y)`, clamped at zero.
///
/// For `y²/(2x) ≥ π/4` the defining series converges at least like
/// `e^{−(π/4)(2j+1)²}`; below that point the Jacobi-dual form does, so each
/// argument is routed to whichever side of the self-dual point it lies on.
pub fn psi(x: f64, y: f64, spec: &DensitySpec) -> Result<f64, LimitError> {
    check_psi_domain(x, y)?;
    if y == 0.0 || y == f64::INFINITY {
        return Ok(0.0);
    }
    let s = y * y / (2.0 * x);
    let sum = if s < PI / 4.0 {
        truncated_sum(spec, |j| dual_term(x, y, j))
    } else {
        truncated_sum(spec, |j| direct_term(x, y, j))
    };
    Ok(sum.max(0.0))
}

/// `ψ(x, y)` from the defining series alone, clamped at zero.
///
/// Converges slowly when `y²/x` is small; kept as an independent route for
/// cross-checking [`psi`].
pub fn psi_direct(x: f64, y: f64, spec: &DensitySpec) -> Result<f64, LimitError> {
    check_psi_domain(x, y)?;
    if y == 0.0 || y == f64::INFINITY {
        return Ok(0.0);
    }
    Ok(truncated_sum(spec, |j| direct_term(x, y, j)).max(0.0))
}

/// Unclamped partial sums `S_0, …, S_J` of the defining series.
pub fn psi_direct_partial_sums(x: f64, y: f64, terms: usize) -> Result<Vec<f64>, LimitError> {
    check_psi_domain(x, y)?;
    let mut sum = 0.0;
    Ok((0..=terms)
        .map(|j| {
            sum += direct_term(x, y, j);
            sum
        })
        .collect())
}

/// Joint density `√(8/π) ψ(x,y) ψ(1−x,y)` of the location and size of the
/// maximum of `|B|`.
///
/// The pair `(x, 1−x)` is canonicalized through its upper member, for which
/// `1 − u` is exact, so `density_tw(x, y)` and `density_tw(1.0 - x, y)` agree
/// bitwise.
pub fn density_tw(x: f64, y: f64, spec: &DensitySpec) -> Result<f64, LimitError> {
    if !(x > 0.0 && x < 1.0) || !(y >= 0.0) {
        return Err(LimitError::OutOfDomain { x, y });
    }
    let upper = if x > 0.5 { x } else { 1.0 - x };
    let lower = 1.0 - upper;
    if lower <= 0.0 {
        return Ok(0.0);
    }
    Ok((8.0 / PI).sqrt() * psi(lower, y, spec)? * psi(upper, y, spec)?)
}
