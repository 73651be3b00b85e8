//! Exact suprema and maximizers of the standardized uniform empirical process
//!
//! For a sample `X_1, …, X_n` in `(0,1)` with empirical distribution function
//! `F_n`, the weighted process is
//!
//! ```text
//! Q_n(t) = √n |F_n(t) − t| / √(t(1−t)),   0 < t < 1
//! ```
//!
//! and the unweighted process is `|u_n(t)| = √n |F_n(t) − t|` on `[0,1]`.
//! Both are càdlàg with jumps at the order statistics. Between two
//! consecutive order statistics `F_n` is a constant `c`, and both
//! `(c − t)/√(t(1−t))` and `c − t` decrease in `t` while `t − c` and
//! `(t − c)/√(t(1−t))` increase, so every supremum is attained either as the
//! right value at an order statistic or as the left limit at one. That turns
//! the supremum into an `O(n)` scan over the sorted sample.
//!
//! All deviations are computed as `fma(∓n, t, ±k) / n`, a single rounding of
//! `k − n·t`. Under the reflection `x ↦ 1 − x` (exact for dyadic samples)
//! the right branch at `i` and the left branch at `n − i + 1` then round the
//! same real number, which makes reflection equivariance hold bitwise.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProcessError {
    #[error("empty sample")]
    EmptySample,
    #[error("value {value} at position {position} is outside the open interval (0,1)")]
    OutOfDomain { position: usize, value: f64 },
    #[error("evaluation point {0} is outside the open interval (0,1)")]
    PointOutOfDomain(f64),
    #[error("alpha {0} is outside (0, 1/2)")]
    InvalidAlpha(f64),
    #[error("grid needs at least 2 points, got {0}")]
    GridTooSmall(usize),
}

/// Which one-sided value of the process attains the supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// `Q_n(t)` itself (right-continuous value).
    RightValue,
    /// `Q_n(t−)`.
    LeftLimit,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::RightValue => "RightValue",
            Side::LeftLimit => "LeftLimit",
        }
    }

    pub fn reflected(self) -> Side {
        match self {
            Side::RightValue => Side::LeftLimit,
            Side::LeftLimit => Side::RightValue,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "RightValue" => Ok(Side::RightValue),
            "LeftLimit" => Ok(Side::LeftLimit),
            other => Err(format!("unknown side `{other}`")),
        }
    }
}

/// A validated sample of points in `(0,1)` together with its order statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    order_stats: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self, ProcessError> {
        if values.is_empty() {
            return Err(ProcessError::EmptySample);
        }
        if let Some((position, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && **v < 1.0))
        {
            return Err(ProcessError::OutOfDomain { position, value });
        }
        let mut order_stats = values.clone();
        // stable; all entries are finite here
        order_stats.sort_by(f64::total_cmp);
        Ok(Self {
            values,
            order_stats,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Values in their original order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `X_{1:n} ≤ … ≤ X_{n:n}`.
    pub fn order_stats(&self) -> &[f64] {
        &self.order_stats
    }

    /// `n · F_n(t)`: number of sample points `≤ t`.
    pub fn count_le(&self, t: f64) -> usize {
        self.order_stats.partition_point(|&x| x <= t)
    }

    /// `n · F_n(t−)`: number of sample points `< t`.
    pub fn count_lt(&self, t: f64) -> usize {
        self.order_stats.partition_point(|&x| x < t)
    }

    /// The sample under `x ↦ 1 − x`.
    pub fn reflect(&self) -> Sample {
        let values = self.values.iter().map(|&x| 1.0 - x).collect();
        // 1 − x stays inside (0,1) for any x inside (0,1)
        Sample::new(values).expect("reflection preserves the open unit interval")
    }
}

/// Sorts `values` into a [`Sample`] after validating the domain.
pub fn order_statistics(values: &[f64]) -> Result<Sample, ProcessError> {
    Sample::new(values.to_vec())
}

/// Supremum of a process together with where it is attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupResult {
    /// `V_n` (weighted) or `W_n` (unweighted); already carries the `√n`.
    pub value: f64,
    /// `τ_n` or `σ_n`.
    pub location: f64,
    /// 1-based index `r` of the maximizing order statistic. `0` is reserved
    /// for an unweighted supremum attained only at `t ∈ {0, 1}`, which
    /// cannot happen for a nonempty sample.
    pub index: usize,
    pub side: Side,
}

/// `(k/n − t)` rounded once.
#[inline]
fn gap_above(k: f64, n: f64, t: f64) -> f64 {
    (-n).mul_add(t, k) / n
}

/// `(t − k/n)` rounded once.
#[inline]
fn gap_below(k: f64, n: f64, t: f64) -> f64 {
    n.mul_add(t, -k) / n
}

#[inline]
fn std_weight(t: f64) -> f64 {
    (t * (1.0 - t)).sqrt()
}

/// Running argmax with the tie rule: smallest index wins, and within one
/// index the left limit wins over the right value when they are equal.
struct ArgmaxScan {
    best: Option<SupResult>,
}

impl ArgmaxScan {
    fn new() -> Self {
        Self { best: None }
    }

    fn offer(&mut self, index: usize, location: f64, right: f64, left: f64) {
        let (value, side) = if left >= right {
            (left, Side::LeftLimit)
        } else {
            (right, Side::RightValue)
        };
        match self.best {
            Some(b) if value <= b.value => {}
            _ => {
                self.best = Some(SupResult {
                    value,
                    location,
                    index,
                    side,
                })
            }
        }
    }

    fn finish(self) -> SupResult {
        self.best.expect("sample is nonempty")
    }
}

/// Both scaled branch values at the `i`-th order statistic (1-based):
/// `(√n (i/n − X_{i:n})/w, √n (X_{i:n} − (i−1)/n)/w)` with `w = √(X(1−X))`.
/// Branches are signed; a negative branch never attains the supremum.
pub fn weighted_branches(sample: &Sample, i: usize) -> (f64, f64) {
    let n = sample.n() as f64;
    let root_n = n.sqrt();
    let x = sample.order_stats[i - 1];
    let w = std_weight(x);
    let right = root_n * (gap_above(i as f64, n, x) / w);
    let left = root_n * (gap_below((i - 1) as f64, n, x) / w);
    (right, left)
}

/// Unweighted counterpart of [`weighted_branches`], with absolute values.
pub fn unweighted_branches(sample: &Sample, i: usize) -> (f64, f64) {
    let n = sample.n() as f64;
    let root_n = n.sqrt();
    let x = sample.order_stats[i - 1];
    let right = root_n * gap_above(i as f64, n, x).abs();
    let left = root_n * gap_below((i - 1) as f64, n, x).abs();
    (right, left)
}

/// `V_n` and its maximizer `τ_n = X_{r:n}`.
pub fn sup_weighted(sample: &Sample) -> SupResult {
    let mut scan = ArgmaxScan::new();
    for (i, &x) in (1..).zip(sample.order_stats.iter()) {
        let (right, left) = weighted_branches(sample, i);
        scan.offer(i, x, right, left);
    }
    scan.finish()
}

/// `W_n` and its maximizer `σ_n`.
pub fn sup_unweighted(sample: &Sample) -> SupResult {
    let mut scan = ArgmaxScan::new();
    for (i, &x) in (1..).zip(sample.order_stats.iter()) {
        let (right, left) = unweighted_branches(sample, i);
        scan.offer(i, x, right, left);
    }
    scan.finish()
}

/// `Q_n(t)` for [`Side::RightValue`], `Q_n(t−)` for [`Side::LeftLimit`].
pub fn eval_q(sample: &Sample, t: f64, side: Side) -> Result<f64, ProcessError> {
    if !(t > 0.0 && t < 1.0) {
        return Err(ProcessError::PointOutOfDomain(t));
    }
    Ok(eval_q_unchecked(sample, t, side))
}

fn eval_q_unchecked(sample: &Sample, t: f64, side: Side) -> f64 {
    let n = sample.n() as f64;
    n.sqrt() * (deviation(sample, t, side) / std_weight(t))
}

/// `|u_n(t)|` or `|u_n(t−)|` on the closed interval `[0,1]`.
pub fn eval_u(sample: &Sample, t: f64, side: Side) -> Result<f64, ProcessError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(ProcessError::PointOutOfDomain(t));
    }
    let n = sample.n() as f64;
    Ok(n.sqrt() * deviation(sample, t, side))
}

/// `|F_n(t) − t|` (or with `F_n(t−)`), oriented so that it is bitwise equal
/// to the branch formulas at order statistics.
fn deviation(sample: &Sample, t: f64, side: Side) -> f64 {
    let n = sample.n() as f64;
    let k = match side {
        Side::RightValue => sample.count_le(t),
        Side::LeftLimit => sample.count_lt(t),
    } as f64;
    match side {
        Side::RightValue => gap_above(k, n, t).abs(),
        Side::LeftLimit => gap_below(k, n, t).abs(),
    }
}

/// Brute-force supremum by direct evaluation of the process definition.
///
/// Evaluates a uniform grid of `grid_points` on `[ε, 1−ε]`, `ε = 1/(2·grid_points)`,
/// plus both one-sided values at every order statistic (and `t ∈ {0,1}` in the
/// unweighted case). `value` is the maximum over the whole evaluation set;
/// `location`, `index` and `side` are the argmax among the order-statistic
/// evaluations under the smallest-`t`, left-limit-first tie rule.
pub fn grid_oracle_sup(
    sample: &Sample,
    grid_points: usize,
    weighted: bool,
) -> Result<SupResult, ProcessError> {
    if grid_points < 2 {
        return Err(ProcessError::GridTooSmall(grid_points));
    }
    let eval = |t: f64, side: Side| -> f64 {
        if weighted {
            eval_q_unchecked(sample, t, side)
        } else {
            let n = sample.n() as f64;
            n.sqrt() * deviation(sample, t, side)
        }
    };

    let mut grid_max = 0.0_f64;
    let eps = 1.0 / (2.0 * grid_points as f64);
    let step = (1.0 - 2.0 * eps) / (grid_points - 1) as f64;
    for k in 0..grid_points {
        let t = eps + k as f64 * step;
        grid_max = grid_max.max(eval(t, Side::RightValue));
    }
    if !weighted {
        grid_max = grid_max.max(eval(0.0, Side::RightValue));
        grid_max = grid_max.max(eval(1.0, Side::LeftLimit));
    }

    // Distinct order-statistic locations in increasing order.
    let mut best: Option<SupResult> = None;
    let mut prev = f64::NAN;
    for &t in sample.order_stats() {
        if t == prev {
            continue;
        }
        prev = t;
        let index = sample.count_lt(t) + 1;
        for side in [Side::LeftLimit, Side::RightValue] {
            let value = eval(t, side);
            if best.is_none_or(|b| value > b.value) {
                best = Some(SupResult {
                    value,
                    location: t,
                    index,
                    side,
                });
            }
        }
    }
    let mut result = best.expect("sample is nonempty");
    result.value = result.value.max(grid_max);
    Ok(result)
}

/// Interior/boundary decomposition of `V_n` for `I = [α, 1−α]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySplit {
    /// `Y_n = sup_{t ∈ [α,1−α]} Q_n(t)`.
    pub interior_sup: f64,
    /// `Z_n = sup_{t ∈ (0,α) ∪ (1−α,1)} Q_n(t)`.
    pub boundary_sup: f64,
    pub alpha: f64,
}

pub fn boundary_split(sample: &Sample, alpha: f64) -> Result<BoundarySplit, ProcessError> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(ProcessError::InvalidAlpha(alpha));
    }
    let lo = alpha;
    let hi = 1.0 - alpha;
    let mut boundary = 0.0_f64;
    for (i, &x) in (1..).zip(sample.order_stats.iter()) {
        let (right, left) = weighted_branches(sample, i);
        if x < lo {
            boundary = boundary.max(right).max(left);
        } else if x == lo {
            // the left limit at α is approached from inside (0, α)
            boundary = boundary.max(left);
        } else if x > hi {
            boundary = boundary.max(right).max(left);
        }
    }
    // limits of the boundary pieces at their open ends
    boundary = boundary
        .max(eval_q_unchecked(sample, lo, Side::LeftLimit))
        .max(eval_q_unchecked(sample, hi, Side::RightValue));
    Ok(BoundarySplit {
        interior_sup: interior_sup(sample, alpha),
        boundary_sup: boundary,
        alpha,
    })
}

/// `√n sup_{t ∈ [a, 1−a]} |F_n(t) − t| / √(t(1−t))` for `a ∈ (0, 1/2]`.
pub(crate) fn interior_sup(sample: &Sample, a: f64) -> f64 {
    let lo = a;
    let hi = 1.0 - a;
    let mut sup = eval_q_unchecked(sample, lo, Side::RightValue).max(eval_q_unchecked(
        sample,
        hi,
        Side::RightValue,
    ));
    if hi > lo {
        sup = sup.max(eval_q_unchecked(sample, hi, Side::LeftLimit));
    }
    let start = sample.order_stats.partition_point(|&x| x < lo);
    for i in start + 1..=sample.n() {
        let x = sample.order_stats[i - 1];
        if x > hi {
            break;
        }
        let (right, left) = weighted_branches(sample, i);
        sup = sup.max(right);
        if x > lo {
            sup = sup.max(left);
        }
    }
    sup
}
