//! Reproducible per-trial random streams.
//!
//! Trial t draws from `trial_stream(master_seed, t, lane)`: a SplitMix-style
//! expansion of (seed, trial, lane) keys a counter-based ChaCha8 generator.
//! Streams are a pure function of their inputs, so Monte Carlo results do
//! not depend on how trials are scheduled across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent sub-streams a single trial may consume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lane {
    /// Matrix entry sampling.
    Matrix,
    /// Auxiliary randomness (interval placement and the like).
    Aux,
}

impl Lane {
    fn tag(self) -> u64 {
        match self {
            Lane::Matrix => 0x6d61_7472_6978_0000,
            Lane::Aux => 0x6175_785f_6c61_6e65,
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A derived master seed for a tagged family of trials (one per matrix
/// dimension in the multi-n experiments, say), so that trial indices do
/// not collide across families.
pub fn substream_seed(master_seed: u64, tag: u64) -> u64 {
    let mut state = master_seed ^ tag.rotate_left(17).wrapping_mul(0xd134_2543_de82_ef95);
    splitmix64(&mut state)
}

/// The generator for trial `trial` under `master_seed`, on the given lane.
pub fn trial_stream(master_seed: u64, trial: u64, lane: Lane) -> ChaCha8Rng {
    let mut state = master_seed
        ^ trial.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ lane.tag();
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
