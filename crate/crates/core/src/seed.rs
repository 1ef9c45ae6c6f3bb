//! Seed derivation and the random number generator used everywhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derives an independent stream seed: the first 8 bytes (little endian) of
/// `SHA-256(master.to_le_bytes() ‖ index.to_le_bytes())`.
pub fn seed_split(master: u64, index: u64) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(index.to_le_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

/// Seed of replicate `index` in stream `stream` (for example one rung of an R ladder).
pub fn replicate_seed(master: u64, stream: u64, index: u64) -> u64 {
    seed_split(seed_split(master, stream), index)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sensitive() {
        assert_eq!(seed_split(7, 3), seed_split(7, 3));
        assert_ne!(seed_split(7, 3), seed_split(7, 4));
        assert_ne!(seed_split(7, 3), seed_split(3, 7));
    }

    #[test]
    fn frozen_value() {
        // Guards the cross-platform stream layout.
        assert_eq!(seed_split(0, 0), 0xd59d_71f7_ff08_4737);
    }
}
