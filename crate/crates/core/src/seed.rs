//! Counter-based random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha stream addressed by
//! `(seed, domain, index)`. Addressing draws by index instead of threading a
//! single generator through a computation keeps results independent of
//! evaluation order, which is what makes replications reorderable and
//! resampled traces replayable from any step.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Named sub-streams. Distinct domains never share a ChaCha stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    /// Index draws of the resampled estimator, keyed by step.
    Resample = 1,
    /// Bernoulli contamination mask, keyed by replication.
    ContaminationMask = 2,
    /// Noise values substituted by contamination, keyed by replication.
    ContaminationNoise = 3,
    /// Seeds handed to per-replication estimators, keyed by replication.
    Replication = 4,
    /// Monte-Carlo generators of the bound check, keyed by replication.
    Generator = 5,
    /// Samplers used by property suites.
    Sampler = 6,
}

const INDEX_BITS: u32 = 48;

/// A ChaCha8 generator positioned at the start of stream `(domain, index)` under `seed`.
pub fn stream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    debug_assert!(index < 1 << INDEX_BITS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((domain as u64) << INDEX_BITS) | index);
    rng
}

/// A child seed for replication `index`, derived from `base`.
pub fn derive(base: u64, domain: Domain, index: u64) -> u64 {
    use rand::RngCore;
    stream(base, domain, index).next_u64()
}
