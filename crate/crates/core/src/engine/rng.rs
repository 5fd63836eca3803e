use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// What a random stream is used for. Distinct purposes never share a stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Purpose {
    Backoff = 1,
    Traffic = 2,
    PacketError = 3,
    Placement = 4,
    Agent = 5,
    Schedule = 6,
}

/// Identifies one independent stream inside a seeded experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StreamId {
    pub trial: u32,
    pub node: u32,
    pub purpose: Purpose,
}

impl StreamId {
    pub fn new(trial: u32, node: u32, purpose: Purpose) -> Self {
        StreamId {
            trial,
            node,
            purpose,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A ChaCha8 stream keyed by `(seed, trial)` with the `(node, purpose)` pair
/// selecting the ChaCha stream word, so streams never overlap.
#[derive(Clone, Debug)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, id: StreamId) -> Self {
        let key = splitmix64(seed ^ splitmix64(u64::from(id.trial).wrapping_add(0xA5A5)));
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        rng.set_stream((u64::from(id.node) << 8) | id.purpose as u64);
        RngStream { rng }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform in `[lo, hi]` (for `lo == hi` returns `lo`).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.rng.random_range(0..n)
    }

    /// Exponential variate with the given mean.
    pub fn exponential(&mut self, mean: f64) -> f64 {
        // 1 - U lies in (0, 1], so the log is finite.
        -mean * (1.0 - self.uniform()).ln()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}
