//! Seeded random streams.
//!
//! All randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`), keyed by
//! `SeedableRng::seed_from_u64(seed)` and split with the 64-bit stream id of
//! the ChaCha block counter. A draw therefore depends only on
//! `(seed, stream)` and its position within that stream, never on thread
//! scheduling or on what other streams were used for.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type StreamRng = ChaCha20Rng;

/// Stream for the random projection matrix.
pub const PROJECTION_STREAM: u64 = 0x7072_6f6a_0000_0000;

/// Returns the generator for `stream` under `seed`.
pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
