//! Seeded, splittable randomness.
//!
//! Every stochastic decision in the crate draws from a [`RandomSource`]: a
//! ChaCha8 generator identified by a 64-bit seed plus a 64-bit stream id.
//! ChaCha8 is specified independently of platform and word size, so the same
//! `(seed, stream)` yields the same draw sequence everywhere.
//!
//! Child sources keep the parent key and move to a distinct stream, so a
//! parent and its children never share output. Per-image child streams keyed
//! by image ordinal make parallel synthesis independent of worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};

#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
    seed: u64,
    stream: u64,
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomSource {
    /// Root source for a 64-bit seed (stream 0).
    pub fn new(seed: u64) -> Self {
        Self::from_parts(seed, 0)
    }

    /// Source at an explicit `(seed, stream)` pair, as stored in provenance
    /// records.
    pub fn from_parts(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, seed, stream }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Derive an independent child source. Children of one parent are
    /// pairwise distinct (the stream map is a bijection of the index);
    /// collisions across different parents are possible only by a 2^-64
    /// accident.
    pub fn child(&self, index: u64) -> Self {
        let stream = splitmix64(
            self.stream ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)),
        );
        Self::from_parts(self.seed, stream)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    /// Uniform in `[lo, hi)`; a degenerate range returns `lo`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        if lo >= hi {
            lo
        } else {
            self.rng.random_range(lo..hi)
        }
    }

    /// Uniform integer in `[lo, hi]` inclusive.
    pub fn range_u32(&mut self, lo: u32, hi: u32) -> u32 {
        if lo >= hi {
            lo
        } else {
            self.rng.random_range(lo..=hi)
        }
    }

    /// Uniform index in `[0, len)`.
    pub fn index(&mut self, len: usize) -> usize {
        debug_assert!(len > 0);
        if len <= 1 {
            0
        } else {
            self.rng.random_range(0..len)
        }
    }

    /// Bernoulli draw; consumes exactly one uniform.
    pub fn coin(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Index drawn proportionally to `weights` (need not be normalized).
    pub fn weighted(&mut self, weights: &[f64]) -> usize {
        debug_assert!(!weights.is_empty());
        let total: f64 = weights.iter().sum();
        let mut u = self.uniform() * total;
        for (i, w) in weights.iter().enumerate() {
            if u < *w {
                return i;
            }
            u -= w;
        }
        weights.len() - 1
    }

    pub fn normal(&mut self, mean: f64, sigma: f64) -> f64 {
        if sigma <= 0.0 {
            return mean;
        }
        Normal::new(mean, sigma).expect("valid normal").sample(&mut self.rng)
    }

    /// Poisson count for the given rate; rate <= 0 yields 0.
    pub fn poisson(&mut self, rate: f64) -> f64 {
        if rate <= 0.0 {
            return 0.0;
        }
        Poisson::new(rate).expect("valid poisson").sample(&mut self.rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn same_seed_same_stream() {
        let mut a = RandomSource::new(42);
        let mut b = RandomSource::new(42);
        let va: Vec<u64> = (0..64).map(|_| a.next_u64()).collect();
        let vb: Vec<u64> = (0..64).map(|_| b.next_u64()).collect();
        assert_eq!(va, vb);
    }

    #[test]
    fn from_parts_reproduces_child() {
        let root = RandomSource::new(7);
        let mut child = root.child(3);
        let mut again = RandomSource::from_parts(child.seed(), child.stream());
        for _ in 0..32 {
            assert_eq!(child.next_u64(), again.next_u64());
        }
    }

    #[test]
    fn children_are_distinct() {
        let root = RandomSource::new(1);
        let mut seen = std::collections::HashSet::new();
        for i in 0..1000 {
            assert!(seen.insert(root.child(i).stream()), "stream collision at {i}");
        }
        // Parent draws differ from child draws.
        let mut parent = RandomSource::new(1);
        let mut child = RandomSource::new(1).child(0);
        let p: Vec<u64> = (0..16).map(|_| parent.next_u64()).collect();
        let c: Vec<u64> = (0..16).map(|_| child.next_u64()).collect();
        assert_ne!(p, c);
    }

    /// Each child stream should look uniform: chi-squared over 100 bins,
    /// 1e5 draws, at the 0.01 significance level.
    #[test]
    fn child_streams_pass_chi_squared_uniformity() {
        const DRAWS: usize = 100_000;
        const BINS: usize = 100;
        let crit = ChiSquared::new((BINS - 1) as f64)
            .unwrap()
            .inverse_cdf(0.99);
        let root = RandomSource::new(0xDEADBEEF);
        for idx in 0..4u64 {
            let mut rng = root.child(idx);
            let mut counts = [0usize; BINS];
            for _ in 0..DRAWS {
                let u = rng.uniform();
                counts[((u * BINS as f64) as usize).min(BINS - 1)] += 1;
            }
            let expect = DRAWS as f64 / BINS as f64;
            let stat: f64 = counts
                .iter()
                .map(|&c| {
                    let d = c as f64 - expect;
                    d * d / expect
                })
                .sum();
            assert!(
                stat < crit,
                "child {idx}: chi-squared {stat:.2} >= critical {crit:.2}"
            );
        }
    }

    #[test]
    fn degenerate_ranges_return_lo() {
        let mut rng = RandomSource::new(5);
        assert_eq!(rng.range(1.5, 1.5), 1.5);
        assert_eq!(rng.range_u32(9, 9), 9);
    }

    #[test]
    fn weighted_respects_certainty() {
        let mut rng = RandomSource::new(11);
        for _ in 0..100 {
            assert_eq!(rng.weighted(&[0.0, 1.0, 0.0]), 1);
        }
    }

    #[test]
    fn normal_and_poisson_edge_cases() {
        let mut rng = RandomSource::new(3);
        assert_eq!(rng.normal(0.25, 0.0), 0.25);
        assert_eq!(rng.poisson(0.0), 0.0);
    }
}
