//! Per-record seeding. Every random decision about a sentence is derived
//! from a digest of `(purpose, seed, doc_id, sentence_index)`, so results do
//! not depend on which worker handles the sentence or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub(crate) fn sentence_digest(purpose: &str, seed: u64, doc_id: &str, index: usize) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update((purpose.len() as u64).to_le_bytes());
    h.update(purpose.as_bytes());
    h.update(seed.to_le_bytes());
    h.update((doc_id.len() as u64).to_le_bytes());
    h.update(doc_id.as_bytes());
    h.update((index as u64).to_le_bytes());
    h.finalize().into()
}

/// Generator used to mask the sentence `(doc_id, index)` under `seed`.
pub fn sentence_rng(seed: u64, doc_id: &str, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(sentence_digest("mask", seed, doc_id, index))
}

/// Uniform draw in `[0, 1)` used by fractional corpus sampling.
pub(crate) fn sentence_unit(seed: u64, doc_id: &str, index: usize) -> f64 {
    let d = sentence_digest("sample", seed, doc_id, index);
    let bits = u64::from_le_bytes(d[..8].try_into().unwrap()) >> 11;
    bits as f64 / (1u64 << 53) as f64
}
