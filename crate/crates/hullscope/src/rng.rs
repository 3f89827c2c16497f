//! Deterministic, scheduling-independent randomness.
//!
//! Every Monte-Carlo trial gets its own generator, keyed by (master seed,
//! trial index) through a splitmix64-style mixer. Results therefore do not
//! depend on how rayon slices the trial range across workers.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer; good avalanche, cheap, and stable across platforms.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Mix a master seed with a stream index into a single sub-seed.
pub fn mix(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0xa076_1d64_78bd_642f)))
}

/// Generator for one trial (or one logical stream) of an experiment.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, trial))
}

/// Generator for a named sub-stream of a trial, e.g. the query draw when it
/// must be decoupled from the data draw.
pub fn subsystem_rng(seed: u64, trial: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(mix(seed, trial), tag))
}
