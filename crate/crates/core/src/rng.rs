//! Seed handling shared by every stochastic routine.
//!
//! All randomness flows from a user seed through [`rng_for`]. Independent
//! streams under one seed are ChaCha stream ids, so an ensemble split into
//! `k` parts uses `rng_for(seed, i)` for `i in 0..k` and the parts never
//! overlap. This is the splitting rule behind "seed_i = seed ⊕ i".

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type LabRng = ChaCha8Rng;

/// Deterministic generator for `(seed, stream)`.
pub fn rng_for(seed: u64, stream: u64) -> LabRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream ids reserved by the library, so user ensembles can pick others.
pub mod streams {
    pub const TREE: u64 = 0;
    pub const CHAIN: u64 = 1 << 32;
    pub const DIFFUSION: u64 = 2 << 32;
    pub const REFERENCE: u64 = 3 << 32;
}
