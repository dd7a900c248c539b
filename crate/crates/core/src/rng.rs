//! Reproducible random streams.
//!
//! Every stochastic routine draws from a ChaCha8 generator keyed by a root
//! seed. Independent workers use distinct stream numbers of the same key, so
//! the sample sequence assigned to a stream index never depends on which
//! thread consumes it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for stream `index` under root `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
