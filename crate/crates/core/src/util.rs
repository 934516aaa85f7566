//! Small shared helpers: seeded generator streams and intensity rounding.
//!
//! Every random consumer derives its own stream from `(seed, stream)`, so
//! results do not depend on processing order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Round half up (toward +inf), the quantization rule used for all 8-bit outputs.
#[inline]
pub fn round_half_up(x: f64) -> f64 {
    (x + 0.5).floor()
}

#[inline]
pub(crate) fn quantize_u8(x: f64) -> u8 {
    round_half_up(x).clamp(0.0, 255.0) as u8
}
