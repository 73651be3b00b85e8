//! Per-replication random streams.
//!
//! Every replication owns a ChaCha8 key built from `(master_seed, size, index,
//! purpose)`, so results do not depend on scheduling or worker count, and any
//! single replication can be regenerated in isolation.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::process::Sample;

/// What a stream is used for; distinct purposes never share a key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPurpose {
    UniformSample,
    BridgePath,
}

impl StreamPurpose {
    fn tag(self) -> u64 {
        match self {
            StreamPurpose::UniformSample => 0x756e_6966_6f72_6d31,
            StreamPurpose::BridgePath => 0x6272_6964_6765_3031,
        }
    }
}

pub fn replication_rng(
    master_seed: u64,
    size: u64,
    index: u64,
    purpose: StreamPurpose,
) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&size.to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    key[24..32].copy_from_slice(&purpose.tag().to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// `n` draws from the open unit interval. Every draw is an odd multiple of
/// `2^-53`, so `1 − x` is exact.
pub fn draw_uniforms<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(Open01)).collect()
}

/// The sample used by replication `index` at size `n`.
pub fn replication_sample(master_seed: u64, n: u64, index: u64) -> Sample {
    let mut rng = replication_rng(master_seed, n, index, StreamPurpose::UniformSample);
    Sample::new(draw_uniforms(&mut rng, n as usize)).expect("Open01 draws lie inside (0,1)")
}
