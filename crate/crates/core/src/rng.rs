//! Named, independent random streams derived from a single seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Generator,
    /// One padded-partition draw of a randomized cover.
    Partition(u64),
    /// Thorup-Zwick level sampling.
    Levels,
    /// One scale of a labeling scheme.
    Scale(u64),
    PairSampling,
}

impl Stream {
    fn id(self) -> u64 {
        // tag in the high byte so indexed streams never collide
        match self {
            Stream::Generator => 1 << 56,
            Stream::Partition(i) => (2 << 56) | (i & ((1 << 56) - 1)),
            Stream::Levels => 3 << 56,
            Stream::Scale(i) => (4 << 56) | (i & ((1 << 56) - 1)),
            Stream::PairSampling => 5 << 56,
        }
    }
}

pub fn stream(seed: u64, which: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which.id());
    rng
}

/// Seed for a nested construction, e.g. the cover built for one scale.
pub fn derive_seed(seed: u64, which: Stream) -> u64 {
    use rand::RngCore;
    stream(seed, which).next_u64()
}
