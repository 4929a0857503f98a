use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// `(seed, stream)` pair naming an independent ChaCha keystream.
///
/// The seed fixes the key; the stream is ChaCha's 64-bit nonce, so stream `i`
/// of a run can be generated without touching streams `0..i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSeed { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}
