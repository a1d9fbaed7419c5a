//! Seed derivation. All randomness in a pipeline flows from one root seed,
//! split per stage and per (agent, day) so that any stage can be re-run in
//! isolation and reproduce its exact random stream.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derive a child seed from a parent seed and a label.
pub fn derive(parent: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(parent.to_le_bytes());
    h.update(b"/");
    h.update(label.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().unwrap())
}

/// Derive a child seed from a parent seed and an integer index.
pub fn derive_idx(parent: u64, label: &str, idx: u64) -> u64 {
    derive(derive(parent, label), &idx.to_string())
}

/// Deterministic RNG for a derived seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_is_stable_and_label_sensitive() {
        assert_eq!(derive(7, "sim"), derive(7, "sim"));
        assert_ne!(derive(7, "sim"), derive(7, "inject"));
        assert_ne!(derive(7, "sim"), derive(8, "sim"));
    }

    #[test]
    fn rng_streams_repeat() {
        use rand::RngCore;
        let a: Vec<u64> = (0..4).map(|_| 0u64).collect();
        let mut r1 = rng(derive(1, "x"));
        let mut r2 = rng(derive(1, "x"));
        let s1: Vec<u64> = a.iter().map(|_| r1.next_u64()).collect();
        let s2: Vec<u64> = a.iter().map(|_| r2.next_u64()).collect();
        assert_eq!(s1, s2);
    }
}
