//! Brute-force reference for near-duplicate search.

use std::collections::BTreeSet;

use mathcrawl_core::dedup::find_duplicates;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn brute_force_pairs(bits: &[u64], max_distance: u32) -> BTreeSet<(usize, usize, u32)> {
    let mut pairs = BTreeSet::new();
    for a in 0..bits.len() {
        for b in a + 1..bits.len() {
            let d = (bits[a] ^ bits[b]).count_ones();
            if d <= max_distance {
                pairs.insert((a, b, d));
            }
        }
    }
    pairs
}

/// `n` fingerprints: a third uniform, the rest copies of earlier ones
/// with 0 to 24 random bits flipped, so many pairs sit near the threshold.
pub fn random_fingerprints(n: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits: Vec<u64> = Vec::with_capacity(n);
    for _ in 0..n {
        if bits.is_empty() || rng.gen_bool(1.0 / 3.0) {
            bits.push(rng.gen());
        } else {
            let mut b = bits[rng.gen_range(0..bits.len())];
            for _ in 0..rng.gen_range(0..=24) {
                b ^= 1 << rng.gen_range(0..64);
            }
            bits.push(b);
        }
    }
    bits
}

/// Banded search against brute force. Returns the number of pairs.
pub fn check_banded(bits: &[u64], max_distance: u32) -> Result<usize, String> {
    let banded: BTreeSet<(usize, usize, u32)> =
        find_duplicates(bits, max_distance).into_iter().map(|p| (p.a, p.b, p.distance)).collect();
    let brute = brute_force_pairs(bits, max_distance);
    if banded != brute {
        let missing = brute.difference(&banded).count();
        let extra = banded.difference(&brute).count();
        return Err(format!("{missing} pairs missing, {extra} extra at distance {max_distance}"));
    }
    Ok(brute.len())
}
