use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Name of the generator behind every stream; printed in CLI metadata.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9), 64-bit stream id";

/// A reproducible random stream: ChaCha20 keyed by `seed`, with the 64-bit
/// ChaCha stream id set to `stream`. Distinct ids give non-overlapping
/// keystreams.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha20Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Stream id of the k-th child. Depends only on (stream, k), never on how
    /// many numbers were drawn.
    pub fn child_id(&self, k: u64) -> u64 {
        splitmix64(self.stream ^ splitmix64(k.wrapping_add(1)))
    }

    pub fn child(&self, k: u64) -> RngStream {
        RngStream::new(self.seed, self.child_id(k))
    }

    /// Uniform on the open interval (0, 1).
    pub fn open01(&mut self) -> f64 {
        loop {
            let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if u > 0.0 {
                return u;
            }
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
