//! Counter-based per-path randomness.
//!
//! Each path owns stream `path_index` of a ChaCha8 generator keyed by the
//! master seed, so path i draws the same numbers whether it runs alone, in a
//! batch, or on any number of threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}
