//! Seeded, reproducible random streams.
//!
//! Every stream is a ChaCha8 generator keyed by SHA-256 over a domain tag, the
//! user seed and a task path (e.g. `[grid point, input, basis]`). The
//! derivation only uses byte-level primitives, so other implementations can
//! regenerate identical streams.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Identifier written into run metadata.
pub const RNG_ALGORITHM: &str =
    "chacha8 (rand_chacha 0.3); key = sha256(\"qtst-sim/rng/v1\" || seed_le64 || path_le64...)";

const DOMAIN: &[u8] = b"qtst-sim/rng/v1";

/// 32-byte key for the substream at `path` under `seed`.
pub fn substream_key(seed: u64, path: &[u64]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(DOMAIN);
    h.update(seed.to_le_bytes());
    for p in path {
        h.update(p.to_le_bytes());
    }
    h.finalize().into()
}

pub fn substream(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(substream_key(seed, path))
}

/// Child seed for nested derivations.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    let key = substream_key(seed, path);
    u64::from_le_bytes(key[..8].try_into().expect("8 bytes"))
}
