//! Counter-based random streams.
//!
//! Every Monte Carlo sample draws from its own ChaCha8 stream selected by the
//! sample index, so a result depends only on `(seed, index)` and never on how
//! samples are distributed across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone)]
pub struct SampleStream {
    base: ChaCha8Rng,
}

impl SampleStream {
    pub fn new(seed: u64) -> Self {
        SampleStream { base: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent generator for sample `index`.
    pub fn at(&self, index: u64) -> SampleRng {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        rng.set_word_pos(0);
        SampleRng(rng)
    }
}

pub struct SampleRng(ChaCha8Rng);

impl SampleRng {
    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }
}
