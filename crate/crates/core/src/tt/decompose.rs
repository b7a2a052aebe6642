//! Cyclic decompositions of loops: the good/bad factorization, pulling a
//! factorization of [f(w)] back to w, and pseudo-legal decompositions into
//! legal pieces and INPs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{NielsenPath, TrainTrack};
use crate::error::{Error, Result};
use crate::graph::{inv, CyclicWord, Edge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Odd,
    Even,
}

/// A cyclic factor w[start .. start + len) (indices mod |w|). Trivial odd
/// factors have len 0 and mark a cut at junction `start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub kind: FactorKind,
    pub start: usize,
    pub len: usize,
    /// Edges of the factor that are good in the ambient loop.
    pub good: usize,
    /// Illegal turns interior to the factor.
    pub ilt: usize,
}

impl Factor {
    pub fn goodness(&self) -> BigRational {
        if self.len == 0 {
            BigRational::zero()
        } else {
            BigRational::new(BigInt::from(self.good), BigInt::from(self.len))
        }
    }

    pub fn edges(&self, w: &[Edge]) -> Vec<Edge> {
        (0..self.len).map(|k| w[(self.start + k) % w.len()]).collect()
    }
}

/// An INP occurring in a loop or path, occupying positions [start, end]
/// around its tip junction (positions measured in edges, possibly beyond
/// [0, |w|] for loops).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InpOccurrence {
    pub inp: usize,
    pub reversed: bool,
    pub junction: usize,
    #[serde(serialize_with = "crate::tt::ser_rational")]
    pub start: BigRational,
    #[serde(serialize_with = "crate::tt::ser_rational")]
    pub end: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudoLegal {
    pub inps: Vec<InpOccurrence>,
    /// Complementary legal pieces as position intervals, possibly empty.
    #[serde(serialize_with = "crate::tt::ser_intervals")]
    pub legal: Vec<(BigRational, BigRational)>,
}

fn int(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl TrainTrack {
    fn count_in(&self, js: &[usize], n: usize, from: usize, len: usize) -> usize {
        // Junctions strictly inside the cyclic interval of edges [from, from+len).
        js.iter().filter(|&&j| len > 0 && (j + n - from) % n >= 1 && (j + n - from) % n < len).count()
    }

    fn make_factor(&self, kind: FactorKind, start: usize, len: usize, mask: &[bool], js: &[usize]) -> Factor {
        let n = mask.len();
        let good = (0..len).filter(|&k| mask[(start + k) % n]).count();
        let ilt = match (len >= n, kind) {
            (false, _) => self.count_in(js, n, start, len),
            (true, FactorKind::Odd) => js.len(),
            // A whole-loop piece cut at one junction.
            (true, FactorKind::Even) => js.len() - 1,
        };
        Factor { kind, start: start % n, len, good, ilt }
    }

    /// Cyclic illegal concatenation w = γ₁ ∘ … ∘ γ₂ₘ: odd factors are unions
    /// of long legal runs (length ≥ 2⌈C⌉ + 1) merged across gaps with at most
    /// A interior illegal turns, or trivial; even factors are the remaining
    /// gaps, cut at illegal turns into pieces with at least A + 1 interior
    /// illegal turns each.
    pub fn good_bad_decomposition(&self, w: &CyclicWord, a: usize) -> Result<Vec<Factor>> {
        let e = w.edges();
        let n = e.len();
        let js = self.illegal_junctions(e, true);
        let k = js.len();
        if k < a + 1 {
            return Err(Error::Precondition(format!("loop has {k} illegal turns, needs at least {}", a + 1)));
        }
        let mask = self.good_mask(e);
        let c = self.cutoff();
        let run_len = |i: usize| if k == 1 { n } else { (js[(i + 1) % k] + n - js[i]) % n };
        let long: Vec<usize> = (0..k).filter(|&i| run_len(i) > 2 * c).collect();
        let mut out = Vec::new();
        // Cuts a stretch of junction indices g0 → g1 (mi interior junctions)
        // into even pieces separated by trivial odd factors.
        let split = |out: &mut Vec<Factor>, g0: usize, mi: usize, q: usize, end_pos: usize| {
            let total = mi + 1 - q;
            let mut idx = g0;
            let mut pos = js[g0 % k];
            for r in 0..q {
                let size = total / q + usize::from(r < total % q);
                if r + 1 == q {
                    let len = match (end_pos + n - pos) % n {
                        0 => n,
                        l => l,
                    };
                    out.push(self.make_factor(FactorKind::Even, pos, len, &mask, &js));
                } else {
                    idx += size + 1;
                    let j = js[idx % k];
                    out.push(self.make_factor(FactorKind::Even, pos, (j + n - pos) % n, &mask, &js));
                    out.push(Factor { kind: FactorKind::Odd, start: j, len: 0, good: 0, ilt: 0 });
                    pos = j;
                }
            }
        };
        if long.is_empty() {
            let q = (k / (a + 2)).max(1);
            out.push(Factor { kind: FactorKind::Odd, start: js[0], len: 0, good: 0, ilt: 0 });
            split(&mut out, 0, k - 1, q, js[0]);
            return Ok(out);
        }
        let m = long.len();
        // Gap after long[p]: junction indices g0 = long[p] + 1 to g1 = long[p + 1].
        let gap = |p: usize| -> (usize, usize, usize) {
            let g0 = (long[p] + 1) % k;
            let g1 = long[(p + 1) % m];
            let span = (g1 + k - g0) % k;
            let interior = if span == 0 && (m > 1 || k == 1) { 0 } else if span == 0 { k - 1 } else { span - 1 };
            (g0, g1, interior)
        };
        let kept: Vec<usize> = (0..m).filter(|&p| gap(p).2 > a).collect();
        if kept.is_empty() {
            out.push(self.make_factor(FactorKind::Odd, js[long[0]], n, &mask, &js));
            return Ok(out);
        }
        for (t, &p) in kept.iter().enumerate() {
            let prev = kept[(t + kept.len() - 1) % kept.len()];
            let start = js[long[(prev + 1) % m]];
            let (g0, g1, mi) = gap(p);
            let end = js[g0];
            out.push(self.make_factor(FactorKind::Odd, start, (end + n - start) % n, &mask, &js));
            let q = ((mi + 1) / (a + 2)).max(1);
            split(&mut out, g0, mi, q, js[g1]);
        }
        Ok(out)
    }

    /// Tags each letter of [f(w)] with the index of the letter of w whose
    /// image contributed it. Rotation agrees with `apply_cyclic`.
    pub fn image_provenance(&self, w: &[Edge]) -> (Vec<Edge>, Vec<usize>) {
        let mut stack: Vec<(Edge, usize)> = Vec::new();
        for (i, &x) in w.iter().enumerate() {
            for &y in self.map().image(x) {
                if stack.last().map(|&(z, _)| z) == Some(inv(y)) {
                    stack.pop();
                } else {
                    stack.push((y, i));
                }
            }
        }
        let mut lo = 0;
        let mut hi = stack.len();
        while hi - lo >= 2 && stack[lo].0 == inv(stack[hi - 1].0) {
            lo += 1;
            hi -= 1;
        }
        stack[lo..hi].iter().copied().unzip()
    }

    /// Given cut junctions of [f(w)] (as returned by `apply_cyclic`) at
    /// illegal turns, returns cut junctions of w at illegal turns such that
    /// each factor's reduced image contains the corresponding image factor.
    pub fn pull_back_decomposition(&self, w: &CyclicWord, cuts: &[usize]) -> Result<Vec<usize>> {
        let e = w.edges();
        let n = e.len();
        let (img, tag) = self.image_provenance(e);
        let m = img.len();
        if cuts.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::InconsistentFactors("cut points must be sorted".into()));
        }
        let illegal_w = self.illegal_junctions(e, true);
        let illegal_img = self.illegal_junctions(&img, true);
        let mut out = Vec::with_capacity(cuts.len());
        for &k in cuts {
            if k >= m || !illegal_img.contains(&k) {
                return Err(Error::InconsistentFactors(format!("cut {k} is not at an illegal turn of the image")));
            }
            let x = tag[(k + m - 1) % m];
            let y = tag[k];
            let span = (y + n - x) % n;
            let span = if span == 0 { n } else { span };
            let j = (1..=span)
                .map(|d| (x + d) % n)
                .find(|j| illegal_w.contains(j))
                .ok_or_else(|| Error::InconsistentFactors(format!("no illegal turn of the loop maps to cut {k}")))?;
            out.push(j);
        }
        Ok(out)
    }

    /// Matches every illegal turn against the tip of an INP (either
    /// orientation) and checks that matched INPs overlap at most in
    /// endpoints. None when some illegal turn is not an INP tip.
    pub fn pseudo_legal_decomposition(&self, w: &[Edge], cyclic: bool, inps: &[NielsenPath]) -> Option<PseudoLegal> {
        let n = w.len();
        if n == 0 {
            return None;
        }
        let at = |i: isize| -> Option<Edge> {
            if cyclic {
                Some(w[i.rem_euclid(n as isize) as usize])
            } else if i >= 0 && (i as usize) < n {
                Some(w[i as usize])
            } else {
                None
            }
        };
        let mut occ = Vec::new();
        for j in self.illegal_junctions(w, cyclic) {
            let mut found = None;
            'search: for (idx, eta) in inps.iter().enumerate() {
                for (reversed, e) in [(false, eta.clone()), (true, eta.reversed())] {
                    let left_ok = e.left.hull.iter().enumerate().all(|(d, &x)| at(j as isize - 1 - d as isize).map(inv) == Some(x));
                    let right_ok = e.right.hull.iter().enumerate().all(|(d, &x)| at(j as isize + d as isize) == Some(x));
                    if left_ok && right_ok {
                        let start = int(j) - e.left.length();
                        let end = int(j) + e.right.length();
                        if cyclic && &end - &start > int(n) {
                            continue;
                        }
                        found = Some(InpOccurrence { inp: idx, reversed, junction: j, start, end });
                        break 'search;
                    }
                }
            }
            occ.push(found?);
        }
        let k = occ.len();
        let mut legal = Vec::new();
        if k == 0 {
            legal.push((int(0), int(n)));
            return Some(PseudoLegal { inps: occ, legal });
        }
        for i in 0..k {
            let next_start = if i + 1 < k {
                occ[i + 1].start.clone()
            } else if cyclic {
                &occ[0].start + int(n)
            } else {
                int(n)
            };
            if occ[i].end > next_start {
                return None;
            }
            legal.push((occ[i].end.clone(), next_start));
        }
        if !cyclic {
            if occ[0].start < int(0) {
                return None;
            }
            legal.insert(0, (int(0), occ[0].start.clone()));
        }
        Some(PseudoLegal { inps: occ, legal })
    }

    /// Edge weights of the legal pieces: each edge of w weighted by the
    /// length of its overlap with the legal intervals.
    pub fn legal_edge_weights(&self, w: &[Edge], pseudo: &PseudoLegal) -> Vec<(Edge, BigRational)> {
        let n = w.len() as i64;
        let mut out = Vec::new();
        for (a, b) in &pseudo.legal {
            if a >= b {
                continue;
            }
            let lo = a.floor().to_integer();
            let hi = b.ceil().to_integer();
            let mut i = lo;
            while i < hi {
                let cell_lo = BigRational::from_integer(i.clone());
                let cell_hi = &cell_lo + int(1);
                let l = if *a > cell_lo { a.clone() } else { cell_lo };
                let r = if *b < cell_hi { b.clone() } else { cell_hi };
                if r > l {
                    let idx: i64 = i.clone().try_into().unwrap();
                    out.push((w[idx.rem_euclid(n) as usize], r - l));
                }
                i += 1;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::graph::{random_cyclic_word, reduce};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn check_tiling(w: &[Edge], fs: &[Factor]) {
        let n = w.len();
        let mut pos = fs[0].start;
        let mut total = 0;
        for f in fs {
            assert_eq!(f.start, pos % n, "{fs:?}");
            pos = f.start + f.len;
            total += f.len;
        }
        assert_eq!(total, n, "{fs:?}");
    }

    fn check_decomposition(tt: &TrainTrack, w: &CyclicWord, a: usize) {
        let fs = tt.good_bad_decomposition(w, a).unwrap();
        check_tiling(w.edges(), &fs);
        let d = super::super::constants::delta(tt.critical(), a);
        let single = fs.len() == 1;
        for (i, f) in fs.iter().enumerate() {
            match f.kind {
                FactorKind::Odd => {
                    assert_eq!(i % 2, 0);
                    assert!(f.len == 0 || f.goodness() >= d, "{f:?}");
                }
                FactorKind::Even => {
                    assert_eq!(i % 2, 1);
                    assert!(f.len > 0 && f.good == 0, "{f:?}");
                    let k = tt.ilt(w.edges());
                    if k > a + 1 {
                        assert!(f.ilt >= a + 1, "{f:?} {fs:?}");
                    }
                    assert!(f.ilt <= 2 * a + 2, "{f:?}");
                }
            }
        }
        assert!(single || fs.len() % 2 == 0);
    }

    #[test]
    fn legal_loop_rejected() {
        let f = plastic();
        let g = f.graph().clone();
        let w = CyclicWord::new(&g, g.parse_word("abc").unwrap()).unwrap();
        assert!(f.ilt(w.edges()) == 0);
        assert!(matches!(f.good_bad_decomposition(&w, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn long_run_with_tight_turns() {
        let f = fib();
        let g = f.graph().clone();
        // A long legal run Aᵐ followed by tight illegal turns b A b A …
        let c = f.cutoff();
        let a = 2;
        let mut w: Vec<Edge> = std::iter::repeat(1).take(2 * c + 3).collect();
        w.extend(g.parse_word(&"bA".repeat(5)).unwrap());
        let w = CyclicWord::new(&g, w).unwrap();
        let fs = f.good_bad_decomposition(&w, a).unwrap();
        check_decomposition(&f, &w, a);
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].kind, FactorKind::Odd);
    }

    #[test]
    fn all_bad_loop_splits_at_trivial_factors() {
        let f = fib();
        let g = f.graph().clone();
        let a = 1;
        // (bA)ᵏ has an illegal turn at every other junction.
        let w = CyclicWord::new(&g, g.parse_word(&"bA".repeat(4)).unwrap()).unwrap();
        assert_eq!(f.ilt(w.edges()), 4);
        let fs = f.good_bad_decomposition(&w, a).unwrap();
        check_decomposition(&f, &w, a);
        assert!(fs.iter().filter(|x| x.kind == FactorKind::Odd).all(|x| x.len == 0));
    }

    fn check_pull_back(tt: &TrainTrack, w: &CyclicWord) {
        let img = tt.map().apply_cyclic(w);
        let (letters, _) = tt.image_provenance(w.edges());
        assert_eq!(letters, img.edges());
        let cuts = tt.illegal_junctions(img.edges(), true);
        if cuts.is_empty() {
            return;
        }
        let back = tt.pull_back_decomposition(w, &cuts).unwrap();
        let n = w.len();
        let m = img.len();
        let t = cuts.len();
        for i in 0..t {
            let (s, e) = (back[i], back[(i + 1) % t]);
            let len = if t == 1 { n } else { (e + n - s) % n };
            let gamma: Vec<Edge> = (0..len).map(|k| w.edges()[(s + k) % n]).collect();
            let (s2, e2) = (cuts[i], cuts[(i + 1) % t]);
            let len2 = if t == 1 { m } else { (e2 + m - s2) % m };
            let gamma2: Vec<Edge> = (0..len2).map(|k| img.edges()[(s2 + k) % m]).collect();
            let fg = reduce(&tt.map().apply(&gamma));
            assert!(
                gamma2.is_empty() || fg.windows(gamma2.len()).any(|x| x == &gamma2[..]),
                "factor {i} of {:?}",
                w.edges()
            );
        }
        assert!(back.iter().all(|j| tt.illegal_junctions(w.edges(), true).contains(j)));
    }

    #[test]
    fn pull_back_misaligned_rejected() {
        let f = plastic_inv();
        let g = f.graph().clone();
        let w = CyclicWord::new(&g, g.parse_word("aBcA").unwrap_or_default()).ok();
        if let Some(w) = w {
            let img = f.map().apply_cyclic(&w);
            let legal: Vec<usize> = (0..img.len()).filter(|j| !f.illegal_junctions(img.edges(), true).contains(j)).collect();
            if let Some(&j) = legal.first() {
                assert!(matches!(f.pull_back_decomposition(&w, &[j]), Err(Error::InconsistentFactors(_))));
            }
        }
    }

    #[test]
    fn pseudo_legal_examples() {
        let f = fib();
        let s = f.find_inps();
        let g = f.graph().clone();
        let legal = g.parse_word("aab").unwrap();
        let d = f.pseudo_legal_decomposition(&legal, true, &s.inps).unwrap();
        assert!(d.inps.is_empty());
        // The INP followed by a legal path back to its start.
        let eta = &s.inps[0];
        let w = eta.hull_path();
        let d = f.pseudo_legal_decomposition(&w, false, &s.inps).unwrap();
        assert_eq!(d.inps.len(), 1);
        assert!(f.pseudo_legal_decomposition(&g.parse_word("bAbA").unwrap(), true, &[]).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn decomposition_invariants(seed in any::<u64>(), len in 4usize..60, a in 0usize..3) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for f in [plastic(), plastic_inv()] {
                let g = f.graph().clone();
                let w = random_cyclic_word(&g, len, &mut rng);
                if f.ilt(w.edges()) >= a + 1 {
                    check_decomposition(&f, &w, a);
                }
                check_pull_back(&f, &w);
            }
        }
    }
}
