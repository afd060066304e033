use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Counter-based stream keyed by `(seed, index)`: each trial or start draws
/// from its own ChaCha stream, so results do not depend on execution order.
pub(crate) fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
