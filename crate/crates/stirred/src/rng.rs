//! Seeded, replayable random streams.
//!
//! Every stochastic run in this crate is keyed by a `(seed, stream)` pair.
//! Streams use ChaCha12, a counter-based generator, so replica `k` of a run
//! can be reproduced bit-exactly without generating replicas `0..k`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Exponential waiting time with the given rate.
///
/// Guards against `u == 0` so the result is always finite.
pub fn exp_time<R: Rng>(rng: &mut R, rate: f64) -> f64 {
    debug_assert!(rate > 0.0);
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    -u.ln() / rate
}
