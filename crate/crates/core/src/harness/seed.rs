use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random streams carved out of one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Session = 1,
    Bit = 2,
    Key = 3,
    Ensemble = 4,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable seed for item `index` of `stream`. Depends only on its inputs, so
/// changing the number of sessions never perturbs earlier ones.
pub fn derive_seed(master_seed: u64, stream: Stream, index: u64) -> u64 {
    let base = mix(master_seed.wrapping_add((stream as u64).wrapping_mul(GOLDEN)));
    mix(base ^ mix(index.wrapping_add(GOLDEN)))
}

pub fn stream_rng(master_seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master_seed, stream, index))
}
