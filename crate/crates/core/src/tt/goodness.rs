//! Goodness of loops and paths relative to the critical constant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::TrainTrack;
use crate::error::{Error, Result};
use crate::graph::{CyclicWord, Edge};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodnessReport {
    pub length: usize,
    pub good: usize,
    pub bad: usize,
    #[serde(serialize_with = "crate::tt::ser_rational")]
    pub goodness: BigRational,
    pub ilt: usize,
}

impl GoodnessReport {
    fn from_mask(mask: &[bool], ilt: usize) -> GoodnessReport {
        let good = mask.iter().filter(|&&g| g).count();
        let length = mask.len();
        let goodness = if length == 0 {
            BigRational::zero()
        } else {
            BigRational::new(BigInt::from(good), BigInt::from(length))
        };
        GoodnessReport { length, good, bad: length - good, goodness, ilt }
    }

    pub fn goodness_f64(&self) -> f64 {
        super::rational_f64(&self.goodness)
    }
}

/// Marks an edge good when at least `c` edges separate it from every junction
/// in `junctions`, counting forward from the junction before it and backward
/// from the junction after it.
pub(crate) fn mark_good(n: usize, junctions: &[usize], c: usize, cyclic: bool) -> Vec<bool> {
    if junctions.is_empty() || c == 0 {
        return vec![true; n];
    }
    let mut mask = vec![true; n];
    for &j in junctions {
        for k in 0..c.min(n) {
            // Edges j, j+1, … lie after the junction; j−1, j−2, … before it.
            let after = j + k;
            if cyclic {
                mask[after % n] = false;
                mask[(j + n - 1 - k) % n] = false;
            } else {
                if after < n {
                    mask[after] = false;
                }
                if j > k {
                    mask[j - 1 - k] = false;
                }
            }
        }
    }
    mask
}

impl TrainTrack {
    /// Good-edge mask of a loop.
    pub fn good_mask(&self, w: &[Edge]) -> Vec<bool> {
        mark_good(w.len(), &self.illegal_junctions(w, true), self.cutoff(), true)
    }

    /// Goodness of a loop.
    pub fn goodness(&self, w: &CyclicWord) -> Result<GoodnessReport> {
        if w.is_empty() {
            return Err(Error::EmptyLoop);
        }
        Ok(self.goodness_word(w.edges()))
    }

    pub(crate) fn goodness_word(&self, w: &[Edge]) -> GoodnessReport {
        let js = self.illegal_junctions(w, true);
        GoodnessReport::from_mask(&mark_good(w.len(), &js, self.cutoff(), true), js.len())
    }

    /// Goodness of a path, relative to the illegal turns it crosses.
    pub fn goodness_path(&self, w: &[Edge]) -> GoodnessReport {
        let js = self.illegal_junctions(w, false);
        GoodnessReport::from_mask(&mark_good(w.len(), &js, self.cutoff(), false), js.len())
    }

    /// Least s ≥ 1 with λ′ˢ ≥ 2⌈C⌉.
    pub fn goodness_monotone_power(&self) -> usize {
        least_power(self.bounds().lambda_min, 2 * self.cutoff() as u64)
    }
}

/// Least s ≥ 1 with base^s ≥ target.
pub fn least_power(base: u64, target: u64) -> usize {
    let mut s = 1;
    let mut x = base as u128;
    while x < target as u128 {
        x *= base as u128;
        s += 1;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::graph::{random_cyclic_word, Graph};
    use proptest::prelude::*;
    use rand::SeedableRng;

    // Edge i is good iff its distance to every illegal junction, measured by
    // explicit walking in both directions, is at least c.
    fn naive_mask(tt: &TrainTrack, w: &[Edge]) -> Vec<bool> {
        let n = w.len();
        let js = tt.illegal_junctions(w, true);
        let c = tt.cutoff();
        (0..n)
            .map(|i| {
                js.iter().all(|&j| {
                    let fwd = (0..n).find(|&d| (j + d) % n == i).unwrap();
                    let bwd = (0..n).find(|&d| (i + 1 + d) % n == j).unwrap();
                    fwd >= c && bwd >= c
                })
            })
            .collect()
    }

    #[test]
    fn legal_loop_is_good() {
        let f = fib();
        let g = f.graph().clone();
        let w = CyclicWord::new(&g, g.parse_word("aab").unwrap()).unwrap();
        let r = f.goodness(&w).unwrap();
        assert_eq!((r.good, r.ilt), (3, 0));
        assert_eq!(r.goodness, BigRational::from_integer(1.into()));
    }

    #[test]
    fn all_bad_loop() {
        let f = fib();
        let g = f.graph().clone();
        let w = CyclicWord::new(&g, g.parse_word("abAB").unwrap()).unwrap();
        let r = f.goodness(&w).unwrap();
        assert_eq!(r.good, 0);
        assert!(r.goodness.is_zero());
    }

    #[test]
    fn one_illegal_turn_leaves_four_good_edges() {
        let f = fib();
        let c = f.cutoff();
        let g = f.graph().clone();
        // b Aᶜ⁺³…: the only illegal junction is A → b at the wrap-around.
        let mut w = g.parse_word("b").unwrap();
        w.extend(std::iter::repeat(1).take(2 * c + 3));
        let cw = CyclicWord::new(&g, w.clone()).unwrap();
        let r = f.goodness(&cw).unwrap();
        assert_eq!(r.ilt, 1);
        assert_eq!(r.length, 2 * c + 4);
        assert_eq!(r.good, 4);
        assert_eq!(f.good_mask(&w), naive_mask(&f, &w));
    }

    #[test]
    fn monotone_power_examples() {
        assert_eq!(least_power(2, 0), 1);
        assert_eq!(least_power(2, 6), 3);
        assert_eq!(least_power(3, 8), 2);
        assert_eq!(fib().goodness_monotone_power(), 3);
    }

    #[test]
    fn path_goodness_ignores_ends() {
        let f = fib();
        let g = f.graph().clone();
        let r = f.goodness_path(&g.parse_word("aaaaaaaa").unwrap());
        assert_eq!((r.good, r.ilt), (8, 0));
    }

    fn check_mask(tt: &TrainTrack, g: &Graph, seed: u64, len: usize) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let w = random_cyclic_word(g, len, &mut rng);
        let r = tt.goodness(&w).unwrap();
        assert_eq!(tt.good_mask(w.edges()), naive_mask(tt, w.edges()));
        assert!(r.ilt <= r.bad || tt.cutoff() == 0);
        assert!(r.bad <= 2 * tt.cutoff() * r.ilt);
    }

    proptest! {
        #[test]
        fn mask_matches_naive(seed in any::<u64>(), len in 1usize..40) {
            let f = plastic();
            let g = f.graph().clone();
            check_mask(&f, &g, seed, len);
            let h = fib();
            let g = h.graph().clone();
            check_mask(&h, &g, seed, len);
        }
    }
}
