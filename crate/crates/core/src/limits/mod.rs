//! Closed-form limit objects: norming constants, the two-sided Gumbel law,
//! the finite-sample maximal inequality, the joint density of the location
//! and size of the Brownian bridge maximum, and the Kolmogorov distribution.

mod quadrature;
mod theta;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use quadrature::{cell_masses, integrate_density, DensityIntegral};
pub use theta::{density_tw, psi, psi_direct, psi_direct_partial_sums, DensitySpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("norming constants need n >= 16, got {0}")]
    TooSmallN(u64),
    #[error("a = {0} is outside (0, 1/2]")]
    InvalidA(f64),
    #[error("lambda = {0} must be positive")]
    InvalidLambda(f64),
    #[error("n must be at least 1")]
    ZeroN,
    #[error("point ({x}, {y}) is outside the domain")]
    OutOfDomain { x: f64, y: f64 },
    #[error("invalid density spec: {0}")]
    InvalidSpec(String),
    #[error("invalid quadrature setup: {0}")]
    InvalidQuadrature(String),
}

/// Smallest sample size with `log log log n` defined and `log log n > 1`.
pub const MIN_NORMING_N: u64 = 16;

/// Affine norming `a_n V_n − b_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormingConstants {
    pub a: f64,
    pub b: f64,
    pub n: u64,
}

impl NormingConstants {
    pub fn normalize(&self, v: f64) -> f64 {
        self.a * v - self.b
    }
}

/// `a_n = √(2 log log n)`, `b_n = 2 log log n + ½ log log log n − ½ log π`.
pub fn norming(n: u64) -> Result<NormingConstants, LimitError> {
    if n < MIN_NORMING_N {
        return Err(LimitError::TooSmallN(n));
    }
    let ll = (n as f64).ln().ln();
    let two_ll = 2.0 * ll;
    Ok(NormingConstants {
        a: two_ll.sqrt(),
        b: two_ll + 0.5 * ll.ln() - 0.5 * std::f64::consts::PI.ln(),
        n,
    })
}

/// `P(Y ≤ y) = exp(−2 e^{−y})`.
pub fn gumbel_cdf(y: f64) -> f64 {
    (-2.0 * (-y).exp()).exp()
}

/// Upper bound on `P(sup_{a ≤ t ≤ 1−a} |F_n(t) − t| / √(t(1−t)) > λ)`:
/// `2 λ^{−2} n^{−1} (log((1−a)/a) + 1)`.
pub fn lemma1_bound(n: u64, a: f64, lambda: f64) -> Result<f64, LimitError> {
    if n == 0 {
        return Err(LimitError::ZeroN);
    }
    if !(a > 0.0 && a <= 0.5) {
        return Err(LimitError::InvalidA(a));
    }
    if !(lambda > 0.0) {
        return Err(LimitError::InvalidLambda(lambda));
    }
    Ok(2.0 / (lambda * lambda) / n as f64 * (((1.0 - a) / a).ln() + 1.0))
}

const KOLMOGOROV_TERMS: usize = 100;

/// CDF of `sup_t |B(t)|` for a Brownian bridge `B`.
///
/// Uses `1 − 2 Σ_{j≥1} (−1)^{j−1} e^{−2j²y²}` for `y ≥ 1` and the Jacobi
/// dual `(√(2π)/y) Σ_{j≥1} e^{−(2j−1)²π²/(8y²)}` below, where the first
/// series stops converging usefully.
pub fn kolmogorov_cdf(y: f64) -> f64 {
    if y.is_nan() {
        return f64::NAN;
    }
    if y <= 0.0 {
        return 0.0;
    }
    if y == f64::INFINITY {
        return 1.0;
    }
    let p = if y < 1.0 {
        kolmogorov_cdf_dual(y)
    } else {
        kolmogorov_cdf_direct(y, KOLMOGOROV_TERMS)
    };
    p.clamp(0.0, 1.0)
}

pub(crate) fn kolmogorov_cdf_direct(y: f64, terms: usize) -> f64 {
    let y2 = y * y;
    let mut sum = 0.0;
    for j in 1..=terms {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * y2).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    1.0 - 2.0 * sum
}

pub(crate) fn kolmogorov_cdf_dual(y: f64) -> f64 {
    let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * y * y);
    let mut sum = 0.0;
    for j in 1..=KOLMOGOROV_TERMS {
        let odd = (2 * j - 1) as f64;
        let term = (-odd * odd * c).exp();
        sum += term;
        if term < 1e-17 * sum.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    (2.0 * std::f64::consts::PI).sqrt() / y * sum
}
