//! Counter-based randomness: every pseudo-random value is a pure function of
//! a key, so samples do not depend on evaluation order or thread schedule.

use crate::graph::{Graph, GraphBuilder};

/// The SplitMix64 output function.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes a key of several words into one.
pub fn hash_words(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x243F_6A88_85A3_08D3, |h, &w| splitmix64(h ^ splitmix64(w)))
}

/// Uniform value in `[0, 1)` for `(seed, counter)`.
#[inline]
pub fn uniform(seed: u64, counter: u64) -> f64 {
    let bits = splitmix64(seed ^ splitmix64(counter.wrapping_add(0x632B_E59B_D9B4_E019)));
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seed for trial `trial` at size `n`.
///
/// The probability is intentionally not part of the key: the same uniforms
/// are reused at every `p`, so a trial's random graph grows monotonically
/// with `p` (the standard coupling).
pub fn trial_seed(master: u64, n: usize, trial: usize) -> u64 {
    hash_words(&[master, n as u64, trial as u64])
}

/// Index of the pair `{u, v}`, `u < v`, in lexicographic order.
#[inline]
pub fn pair_index(n: usize, u: usize, v: usize) -> u64 {
    debug_assert!(u < v && v < n);
    (u * (2 * n - u - 1) / 2 + (v - u - 1)) as u64
}

/// `G(n, p)`: the pair with index `i` is present iff `uniform(seed, i) < p`.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut b = GraphBuilder::new(n);
    if p > 0.0 {
        let mut idx = 0u64;
        for u in 0..n {
            for v in u + 1..n {
                if uniform(seed, idx) < p {
                    b.add_edge(u, v);
                }
                idx += 1;
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_coupling() {
        assert_eq!(sample_gnp(30, 0.0, 7).edge_count(), 0);
        assert_eq!(sample_gnp(30, 1.0, 7).edge_count(), 435);
        let lo = sample_gnp(40, 0.1, 99);
        let hi = sample_gnp(40, 0.3, 99);
        assert!(lo.is_subgraph_of(&hi));
        assert_eq!(sample_gnp(40, 0.2, 5), sample_gnp(40, 0.2, 5));
        assert_ne!(sample_gnp(40, 0.5, 5), sample_gnp(40, 0.5, 6));
    }

    #[test]
    fn pair_indices_are_lexicographic() {
        let n = 9;
        let mut expect = 0;
        for u in 0..n {
            for v in u + 1..n {
                assert_eq!(pair_index(n, u, v), expect);
                expect += 1;
            }
        }
    }

    #[test]
    fn uniform_is_in_range() {
        for i in 0..10_000 {
            let x = uniform(3, i);
            assert!((0.0..1.0).contains(&x));
        }
    }
}
