//! Suprema and maximizers of the standardized uniform empirical process.
//!
//! * [`process`]: exact `V_n`, `τ_n`, `W_n`, `σ_n` from a sample, with a
//!   brute-force grid oracle and the interior/boundary split.
//! * [`limits`]: norming constants, Gumbel and Kolmogorov laws, the maximal
//!   inequality bound, and the joint density of `(argmax |B|, max |B|)`.
//! * [`bridge`]: grid Brownian bridge sampler used as an independent oracle.
//! * [`harness`]: seeded Monte Carlo experiments and distance statistics.
//! * [`formats`]: sample text and CSV input/output.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bridge;
pub mod formats;
pub mod harness;
pub mod limits;
pub mod process;

pub use harness::{AlphaRule, ExperimentConfig, ReplicationRecord};
pub use limits::{DensitySpec, NormingConstants};
pub use process::{Sample, Side, SupResult};
