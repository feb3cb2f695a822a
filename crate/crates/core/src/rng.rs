//! Seeded random streams.
//!
//! One 64-bit seed fans out into independent ChaCha streams, one per
//! consumer, so that e.g. changing how many edge draws a generator makes
//! never shifts the belief assignment drawn from the same seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Beliefs = 0,
    Edges = 1,
    Simulation = 2,
    Census = 3,
}

pub fn stream(seed: u64, which: Stream) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}
