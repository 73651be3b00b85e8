//! Grid Brownian bridge paths and the location/size of their absolute maximum.
//!
//! Paths are exact in distribution at the grid nodes. The grid maximum never
//! exceeds the continuous supremum, so `value` is biased low by `O(1/√m)`.

use rand::Rng;
use rand_distr::StandardNormal;

/// Default number of grid steps.
pub const DEFAULT_GRID: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct BridgePath {
    nodes: Vec<f64>,
}

impl BridgePath {
    /// Wraps node values `B(k/m)`, `k = 0..=m`. Returns `None` unless the
    /// endpoints are exactly zero, all entries are finite and `m >= 1`.
    pub fn from_nodes(nodes: Vec<f64>) -> Option<Self> {
        let ok = nodes.len() >= 2
            && nodes[0] == 0.0
            && nodes[nodes.len() - 1] == 0.0
            && nodes.iter().all(|v| v.is_finite());
        ok.then_some(Self { nodes })
    }

    /// Number of grid steps.
    pub fn m(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

/// `B(k/m) = S_k − (k/m) S_m` for a Gaussian walk `S` with step variance `1/m`.
///
/// # Panics
///
/// If `m < 2`.
pub fn sample_bridge<R: Rng + ?Sized>(m: usize, rng: &mut R) -> BridgePath {
    assert!(m >= 2, "bridge grid needs at least 2 steps");
    let scale = (1.0 / m as f64).sqrt();
    let mut nodes = Vec::with_capacity(m + 1);
    let mut walk = 0.0;
    nodes.push(0.0);
    for _ in 0..m {
        let z: f64 = rng.sample(StandardNormal);
        walk += scale * z;
        nodes.push(walk);
    }
    let end = walk;
    for (k, v) in nodes.iter_mut().enumerate() {
        *v -= (k as f64 / m as f64) * end;
    }
    nodes[0] = 0.0;
    nodes[m] = 0.0;
    BridgePath { nodes }
}

/// `(k*/m, max_k |B(k/m)|)` with `k*` the smallest maximizing node.
pub fn argmax_abs(path: &BridgePath) -> (f64, f64) {
    let mut best_k = 0;
    let mut best = 0.0_f64;
    for (k, v) in path.nodes.iter().enumerate() {
        let a = v.abs();
        if a > best {
            best = a;
            best_k = k;
        }
    }
    (best_k as f64 / path.m() as f64, best)
}
