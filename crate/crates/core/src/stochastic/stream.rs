use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Address of a reproducible random sequence.
///
/// The uniform source is ChaCha20 (rand_chacha), keyed by expanding `seed`
/// through rand_core's portable PCG32 seeder, with `stream_id` selecting the
/// 64-bit ChaCha stream nonce. ChaCha is counter-based: every stream has a
/// 2^68-byte period of its own, so distinct stream ids never overlap.
/// Gaussian variates come from the ziggurat sampler in `rand_distr`
/// (`StandardNormal`), which is exact and uses only IEEE arithmetic.
///
/// Parallel trials use `stream_id = trial_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// An independent sub-stream for one internal phase of a computation
    /// (emission times, outcomes, noise pools). The lane index is folded
    /// into the seed with a SplitMix64 finaliser; `stream_id` is kept.
    pub fn lane(&self, lane: u64) -> RandomStream {
        let mut z = self.seed ^ lane.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        RandomStream { seed: z, stream_id: self.stream_id }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// `count` standard normal draws from the start of `stream`.
pub fn gaussian_sequence(stream: RandomStream, count: usize) -> Vec<f64> {
    let mut rng = stream.rng();
    (0..count).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}
