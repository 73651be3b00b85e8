//! Seeded, reproducible Monte Carlo experiments.
//!
//! Replications are independent and each draws from its own derived stream
//! (see [`streams`]). Work is spread over a private rayon pool and collected
//! in replication order, so outputs are identical for every worker count.

mod stats;
pub mod streams;

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bridge::{argmax_abs, sample_bridge};
use crate::limits::{gumbel_cdf, lemma1_bound, norming, LimitError, NormingConstants};
use crate::process::{interior_sup, sup_unweighted, sup_weighted, Sample, Side};

pub use stats::{independence_tv_pairs, ks_distance, Histogram2D, MIN_INDEPENDENCE_RECORDS};
use streams::{replication_rng, replication_sample, StreamPurpose};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error("empty sample")]
    EmptySample,
    #[error("need at least {need} records, got {got}")]
    TooFewRecords { got: usize, need: usize },
    #[error("bin edges must be strictly increasing with at least two entries")]
    InvalidEdges,
    #[error("reference cell masses do not match the histogram shape")]
    ShapeMismatch,
    #[error("record for n = {0} carries no normalized value")]
    MissingNormalized(u64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("alpha rule: {0}")]
    InvalidAlphaRule(String),
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
}

/// How the interior/boundary cut `α_n` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    /// `α_n = 1 / log log n`.
    LogLog,
    Fixed(f64),
}

impl AlphaRule {
    /// `α_n` for sample size `n`. Under [`AlphaRule::LogLog`] the value can
    /// reach `1/2` or more (for `n ≤ 1618`), in which case the interior
    /// `(α_n, 1 − α_n)` is empty.
    pub fn alpha(&self, n: u64) -> Result<f64, HarnessError> {
        match *self {
            AlphaRule::LogLog => {
                let ll = (n as f64).ln().ln();
                if !(ll > 1.0) {
                    return Err(HarnessError::InvalidAlphaRule(format!(
                        "1/log log n needs n > e^e, got n = {n}"
                    )));
                }
                Ok(1.0 / ll)
            }
            AlphaRule::Fixed(a) => Ok(a),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        match *self {
            AlphaRule::LogLog => Ok(()),
            AlphaRule::Fixed(a) if a > 0.0 && a < 0.5 => Ok(()),
            AlphaRule::Fixed(a) => Err(HarnessError::InvalidAlphaRule(format!(
                "fixed alpha {a} is outside (0, 1/2)"
            ))),
        }
    }
}

impl FromStr for AlphaRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("loglog") {
            return Ok(AlphaRule::LogLog);
        }
        let a: f64 = s
            .parse()
            .map_err(|_| format!("expected `loglog` or a number, got `{s}`"))?;
        let rule = AlphaRule::Fixed(a);
        rule.validate().map_err(|e| e.to_string())?;
        Ok(rule)
    }
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_values: Vec<u64>,
    pub replications: u64,
    pub master_seed: u64,
    pub alpha_rule: AlphaRule,
    pub weighted: bool,
    /// Attach `a_n V_n − b_n` to weighted records. Requires every `n ≥ 16`.
    #[serde(default = "default_true")]
    pub normalize: bool,
}

impl ExperimentConfig {
    pub fn norming_applied(&self) -> bool {
        self.weighted && self.normalize
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.replications == 0 {
            return Err(HarnessError::InvalidConfig(
                "replications must be >= 1".into(),
            ));
        }
        if self.n_values.is_empty() {
            return Err(HarnessError::InvalidConfig("n_values is empty".into()));
        }
        if self.n_values.contains(&0) {
            return Err(HarnessError::InvalidConfig(
                "sample sizes must be >= 1".into(),
            ));
        }
        self.alpha_rule.validate()?;
        if self.norming_applied() {
            for &n in &self.n_values {
                norming(n)?;
            }
        }
        Ok(())
    }
}

/// One replication of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub n: u64,
    pub replication: u64,
    /// `V_n` or `W_n`.
    pub v: f64,
    /// `τ_n` or `σ_n`.
    pub tau: f64,
    pub r_index: usize,
    pub r_over_n: f64,
    /// `a_n V_n − b_n`; absent when norming is not applied.
    pub normalized: Option<f64>,
    pub side: Side,
}

/// Computes the record for one already-drawn sample.
pub fn record_for_sample(
    sample: &Sample,
    replication: u64,
    weighted: bool,
    norming: Option<&NormingConstants>,
) -> ReplicationRecord {
    let sup = if weighted {
        sup_weighted(sample)
    } else {
        sup_unweighted(sample)
    };
    let n = sample.n() as u64;
    ReplicationRecord {
        n,
        replication,
        v: sup.value,
        tau: sup.location,
        r_index: sup.index,
        r_over_n: sup.index as f64 / n as f64,
        normalized: norming.map(|c| c.normalize(sup.value)),
        side: sup.side,
    }
}

/// Runs `f(0), …, f(len − 1)` on a pool of `workers` threads (`0` lets rayon
/// choose) and returns the results in index order.
fn ordered_par_map<T, F>(workers: usize, len: usize, f: F) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
    Ok(pool.install(|| (0..len).into_par_iter().map(f).collect()))
}

/// Records for every `(n, replication)` pair, ordered by `n` as listed in the
/// config and then by replication index.
pub fn run_experiment(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<Vec<ReplicationRecord>, HarnessError> {
    config.validate()?;
    let reps = config.replications as usize;
    let mut out = Vec::with_capacity(config.n_values.len() * reps);
    for &n in &config.n_values {
        let constants = if config.norming_applied() {
            Some(norming(n)?)
        } else {
            None
        };
        let records = ordered_par_map(workers, reps, |k| {
            let sample = replication_sample(config.master_seed, n, k as u64);
            record_for_sample(&sample, k as u64, config.weighted, constants.as_ref())
        })?;
        out.extend(records);
    }
    Ok(out)
}

/// `(argmax, max)` of `|B|` on an `m`-step grid for `paths` independent bridges.
pub fn bridge_functionals(
    m: usize,
    paths: u64,
    master_seed: u64,
    workers: usize,
) -> Result<Vec<(f64, f64)>, HarnessError> {
    if m < 2 {
        return Err(HarnessError::InvalidConfig(
            "bridge grid needs m >= 2".into(),
        ));
    }
    ordered_par_map(workers, paths as usize, |k| {
        let mut rng = replication_rng(master_seed, m as u64, k as u64, StreamPurpose::BridgePath);
        argmax_abs(&sample_bridge(m, &mut rng))
    })
}

/// Independence distance between `1{τ > x_cut}` and the binned normalized
/// value.
pub fn independence_tv(
    records: &[ReplicationRecord],
    x_cut: f64,
    y_edges: &[f64],
) -> Result<f64, HarnessError> {
    let pairs = records
        .iter()
        .map(|r| {
            r.normalized
                .map(|y| (r.tau, y))
                .ok_or(HarnessError::MissingNormalized(r.n))
        })
        .collect::<Result<Vec<_>, _>>()?;
    independence_tv_pairs(&pairs, x_cut, y_edges)
}

/// Fraction of records whose `r/n` lies in the open interval `(lo, hi)`.
pub fn central_mass(records: &[ReplicationRecord], lo: f64, hi: f64) -> f64 {
    if records.is_empty() {
        return f64::NAN;
    }
    let hits = records
        .iter()
        .filter(|r| r.r_over_n > lo && r.r_over_n < hi)
        .count();
    hits as f64 / records.len() as f64
}

/// Monte Carlo check of the maximal inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub lhs_hat: f64,
    pub stderr: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl Lemma1Report {
    fn from_counts(exceed: u64, replications: u64, rhs: f64) -> Self {
        let p = exceed as f64 / replications as f64;
        let stderr = (p * (1.0 - p) / replications as f64).sqrt();
        Self {
            lhs_hat: p,
            stderr,
            rhs,
            pass: p <= rhs + 3.0 * stderr,
        }
    }
}

/// `sup_{a ≤ t ≤ 1−a} |F_n(t) − t| / √(t(1−t))` without the `√n` factor.
///
/// Every statistic in this crate except this one carries `√n`; this is the
/// only place where it is removed.
pub fn unscaled_interior_sup(sample: &Sample, a: f64) -> f64 {
    interior_sup(sample, a) / (sample.n() as f64).sqrt()
}

/// Estimates `P(sup_{a ≤ t ≤ 1−a} |F_n − t|/√(t(1−t)) > λ)` and compares it
/// with the bound `2 λ^{−2} n^{−1} (log((1−a)/a) + 1)`.
pub fn verify_lemma1(
    n: u64,
    a: f64,
    lambda: f64,
    replications: u64,
    master_seed: u64,
    workers: usize,
) -> Result<Lemma1Report, HarnessError> {
    let cells = verify_lemma1_grid(&[n], &[a], &[lambda], replications, master_seed, workers)?;
    Ok(cells[0].report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Cell {
    pub n: u64,
    pub a: f64,
    pub lambda: f64,
    pub report: Lemma1Report,
}

/// [`verify_lemma1`] over a parameter grid. Each sample is drawn once per `n`
/// and reused for every `(a, λ)`; every cell equals the corresponding single
/// call with the same seed.
pub fn verify_lemma1_grid(
    ns: &[u64],
    a_values: &[f64],
    lambdas: &[f64],
    replications: u64,
    master_seed: u64,
    workers: usize,
) -> Result<Vec<Lemma1Cell>, HarnessError> {
    if replications == 0 {
        return Err(HarnessError::InvalidConfig(
            "replications must be >= 1".into(),
        ));
    }
    for &n in ns {
        for &a in a_values {
            for &l in lambdas {
                lemma1_bound(n, a, l)?;
            }
        }
    }
    let mut cells = Vec::with_capacity(ns.len() * a_values.len() * lambdas.len());
    for &n in ns {
        let sups = ordered_par_map(workers, replications as usize, |k| {
            let sample = replication_sample(master_seed, n, k as u64);
            a_values
                .iter()
                .map(|&a| unscaled_interior_sup(&sample, a))
                .collect::<Vec<_>>()
        })?;
        for (ai, &a) in a_values.iter().enumerate() {
            for &lambda in lambdas {
                let exceed = sups.iter().filter(|s| s[ai] > lambda).count() as u64;
                let rhs = lemma1_bound(n, a, lambda)?;
                cells.push(Lemma1Cell {
                    n,
                    a,
                    lambda,
                    report: Lemma1Report::from_counts(exceed, replications, rhs),
                });
            }
        }
    }
    Ok(cells)
}

/// Finite-`n` diagnostics for one sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u64,
    pub ks_to_gumbel: f64,
    /// Empirical `P(τ_n ∈ (α_n, 1 − α_n))`.
    pub mass_interior: f64,
    pub p_tau_le_half: f64,
    pub mean_v_over_an: f64,
    /// `None` when fewer than [`MIN_INDEPENDENCE_RECORDS`] records exist.
    pub independence_tv: Option<f64>,
}

/// Diagnostics row from the weighted, normalized records of size `n`.
pub fn convergence_row(
    n: u64,
    records: &[ReplicationRecord],
    alpha_rule: &AlphaRule,
    y_edges: &[f64],
) -> Result<ConvergenceRow, HarnessError> {
    let rows: Vec<&ReplicationRecord> = records.iter().filter(|r| r.n == n).collect();
    if rows.is_empty() {
        return Err(HarnessError::EmptySample);
    }
    let constants = norming(n)?;
    let alpha = alpha_rule.alpha(n)?;
    let count = rows.len() as f64;

    let normalized = rows
        .iter()
        .map(|r| r.normalized.ok_or(HarnessError::MissingNormalized(n)))
        .collect::<Result<Vec<_>, _>>()?;
    let ks_to_gumbel = ks_distance(&normalized, gumbel_cdf)?;
    let interior = rows
        .iter()
        .filter(|r| r.tau > alpha && r.tau < 1.0 - alpha)
        .count();
    let le_half = rows.iter().filter(|r| r.tau <= 0.5).count();
    let mean_v_over_an = rows.iter().map(|r| r.v / constants.a).sum::<f64>() / count;

    let independence_tv = if rows.len() >= MIN_INDEPENDENCE_RECORDS {
        let pairs: Vec<(f64, f64)> = rows
            .iter()
            .zip(&normalized)
            .map(|(r, &y)| (r.tau, y))
            .collect();
        Some(independence_tv_pairs(&pairs, 0.5, y_edges)?)
    } else {
        None
    };

    Ok(ConvergenceRow {
        n,
        ks_to_gumbel,
        mass_interior: interior as f64 / count,
        p_tau_le_half: le_half as f64 / count,
        mean_v_over_an,
        independence_tv,
    })
}

/// Default `y` bins for the independence diagnostic: cut points at the
/// deciles of the two-sided Gumbel law, with open outer bins.
pub fn default_y_edges() -> Vec<f64> {
    (1..10)
        .map(|k| {
            let p = k as f64 / 10.0;
            -(-p.ln() / 2.0).ln()
        })
        .collect()
}

/// One [`ConvergenceRow`] per `n` of a weighted, normalized experiment.
pub fn convergence_table(
    config: &ExperimentConfig,
    y_edges: &[f64],
    workers: usize,
) -> Result<Vec<ConvergenceRow>, HarnessError> {
    if !config.norming_applied() {
        return Err(HarnessError::InvalidConfig(
            "convergence table needs weighted, normalized records".into(),
        ));
    }
    if !config.n_values.windows(2).all(|w| w[0] < w[1]) {
        return Err(HarnessError::InvalidConfig(
            "n_values must be increasing".into(),
        ));
    }
    for &n in &config.n_values {
        config.alpha_rule.alpha(n)?;
    }
    let records = run_experiment(config, workers)?;
    config
        .n_values
        .iter()
        .map(|&n| convergence_row(n, &records, &config.alpha_rule, y_edges))
        .collect()
}
