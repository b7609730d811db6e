//! Named random sub-streams derived from one master seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::C64;

/// Independent consumers of randomness. Each gets its own ChaCha stream so
/// that drawing more numbers in one place never shifts another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Slice = 1,
    Gamma = 2,
    Loop = 3,
    Census = 4,
    Detour = 5,
    SdpData = 6,
    SdpSquaring = 7,
}

/// Generator for `(seed, stream, index)`.
pub fn substream(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    debug_assert!(index < 1 << 48);
    rng.set_stream(((stream as u64) << 48) | index);
    rng
}

/// Uniform on the unit square `[0,1) × [0,1)` of the complex plane.
pub fn unit_square<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.random::<f64>(), rng.random::<f64>())
}

/// Uniform on the unit circle.
pub fn unit_circle<R: Rng>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU)
}

/// Uniform on the closed unit disk.
pub fn unit_disk<R: Rng>(rng: &mut R) -> C64 {
    unit_circle(rng) * rng.random::<f64>().sqrt()
}
