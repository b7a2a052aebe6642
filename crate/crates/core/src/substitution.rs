//! The substitution induced by a graph map, exact factor counts in its
//! iterates and limit frequencies by power iteration on the block lift.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::inv;
use crate::map::GraphMap;

pub type Letter = u32;

/// Consecutive steps below tolerance required to accept a limit.
pub const SETTLE: usize = 3;

/// Default cap on power iteration steps.
pub const DEFAULT_MAX_ITER: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Substitution {
    pub names: Vec<String>,
    pub images: Vec<Vec<Letter>>,
    /// Letters come in pairs 2i, 2i+1 with ζ(x̄) the reversed inverse of ζ(x).
    pub involutive: bool,
}

/// Limit frequencies of the factors of length ≤ `radius` in ζᵗ(e).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyVector {
    pub radius: usize,
    pub basepoint: Letter,
    /// Nonzero frequencies keyed by factor; absent factors have frequency 0.
    pub values: BTreeMap<Vec<Letter>, f64>,
    /// Power of ζ iterated.
    pub power: usize,
    pub iterations: usize,
    pub tol: f64,
}

impl FrequencyVector {
    pub fn get(&self, w: &[Letter]) -> f64 {
        self.values.get(w).copied().unwrap_or(0.0)
    }
}

/// A ratio of big integers as a float, safe for huge operands.
pub fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    let shift = b.bits().max(a.bits()).saturating_sub(60);
    let (x, y) = ((a >> shift).to_f64().unwrap_or(f64::NAN), (b >> shift).to_f64().unwrap_or(f64::NAN));
    x / y
}

/// The L-block presentation of ζ seen from one basepoint letter: states are
/// length-L windows of ζᵗ(e)#^(L−1) with the sentinel # fixed by ζ.
#[derive(Debug, Clone)]
pub struct BlockLift {
    pub len: usize,
    pub sentinel: Letter,
    pub blocks: Vec<Vec<Letter>>,
    /// succ[b] lists the blocks of ζ_L(b) with multiplicity.
    pub succ: Vec<Vec<(usize, u64)>>,
    pub start: usize,
}

impl BlockLift {
    /// Exact block counts of ζᵗ(e), indexed like `blocks`.
    pub fn step(&self, v: &[BigUint]) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); v.len()];
        for (b, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for &(c, k) in &self.succ[b] {
                out[c] += x * k;
            }
        }
        out
    }

    pub fn initial(&self) -> Vec<BigUint> {
        let mut v = vec![BigUint::zero(); self.blocks.len()];
        v[self.start] = BigUint::from(1u32);
        v
    }

    /// The least power of ζ_L whose strongly connected components are all
    /// aperiodic: the lcm of their cyclic periods.
    pub fn period(&self) -> usize {
        let mut g = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..self.blocks.len()).map(|_| g.add_node(())).collect();
        for (b, s) in self.succ.iter().enumerate() {
            for &(c, _) in s {
                g.add_edge(nodes[b], nodes[c], ());
            }
        }
        let mut p = 1usize;
        for comp in tarjan_scc(&g) {
            let idx: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, n)| (n.index(), i)).collect();
            let mut level = vec![usize::MAX; comp.len()];
            level[0] = 0;
            let mut queue = VecDeque::from([comp[0].index()]);
            let mut gcd = 0usize;
            while let Some(u) = queue.pop_front() {
                let lu = level[idx[&u]];
                for &(c, _) in &self.succ[u] {
                    if let Some(&j) = idx.get(&c) {
                        if level[j] == usize::MAX {
                            level[j] = lu + 1;
                            queue.push_back(c);
                        } else {
                            gcd = gcd.gcd(&(lu + 1).abs_diff(level[j]));
                        }
                    }
                }
            }
            if gcd > 0 {
                p = p.lcm(&gcd);
            }
        }
        p
    }
}

impl Substitution {
    pub fn new(names: Vec<String>, images: Vec<Vec<Letter>>) -> Result<Substitution> {
        let n = names.len();
        if images.len() != n {
            return Err(Error::Precondition("one image per letter".into()));
        }
        if images.iter().flatten().any(|&x| x as usize >= n) {
            return Err(Error::Precondition("image uses an unknown letter".into()));
        }
        if images.iter().any(|w| w.is_empty()) {
            return Err(Error::Precondition("erasing substitution".into()));
        }
        let involutive = n % 2 == 0
            && (0..n).all(|x| {
                let y = inv(x as Letter) as usize;
                images[y].iter().rev().map(|&z| inv(z)).eq(images[x].iter().copied())
            });
        Ok(Substitution { names, images, involutive })
    }

    /// ζ_f on the oriented edges of the graph.
    pub fn from_map(f: &GraphMap) -> Substitution {
        let g = f.graph();
        Substitution {
            names: g.edges().map(|e| g.edge_name(e)).collect(),
            images: g.edges().map(|e| f.image(e).to_vec()).collect(),
            involutive: true,
        }
    }

    pub fn alphabet_len(&self) -> usize {
        self.names.len()
    }

    pub fn apply(&self, w: &[Letter]) -> Vec<Letter> {
        w.iter().flat_map(|&x| self.images[x as usize].iter().copied()).collect()
    }

    /// ζᵗ(w) written out.
    pub fn expand(&self, w: &[Letter], t: usize) -> Vec<Letter> {
        (0..t).fold(w.to_vec(), |acc, _| self.apply(&acc))
    }

    pub fn format(&self, w: &[Letter]) -> String {
        let sep = if self.names.iter().all(|n| n.len() == 1) { "" } else { " " };
        w.iter().map(|&x| self.names[x as usize].as_str()).collect::<Vec<_>>().join(sep)
    }

    /// Whether every letter has an iterate of length at least 2.
    pub fn is_expanding(&self) -> bool {
        let n = self.alphabet_len();
        (0..n).all(|x| {
            let mut w = vec![x as Letter];
            for _ in 0..=n {
                if w.len() >= 2 {
                    return true;
                }
                w = self.apply(&w);
            }
            w.len() >= 2
        })
    }

    /// The L-block lift reachable from the basepoint letter e.
    pub fn block_lift(&self, e: Letter, len: usize) -> BlockLift {
        assert!(len >= 1);
        let sentinel = self.alphabet_len() as Letter;
        let image = |x: Letter| -> &[Letter] {
            if x == sentinel {
                std::slice::from_ref(&sentinel)
            } else {
                &self.images[x as usize]
            }
        };
        let mut first = vec![e];
        first.resize(len, sentinel);
        let mut index: HashMap<Vec<Letter>, usize> = HashMap::from([(first.clone(), 0)]);
        let mut blocks = vec![first];
        let mut succ: Vec<Vec<(usize, u64)>> = Vec::new();
        let mut i = 0;
        while i < blocks.len() {
            let b = blocks[i].clone();
            let head = image(b[0]).len();
            let mut full: Vec<Letter> = Vec::with_capacity(head + len);
            for &x in &b {
                if full.len() >= head + len - 1 {
                    break;
                }
                full.extend_from_slice(image(x));
            }
            let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
            for p in 0..head {
                let w = full[p..p + len].to_vec();
                let id = *index.entry(w.clone()).or_insert_with(|| {
                    blocks.push(w);
                    blocks.len() - 1
                });
                *counts.entry(id).or_default() += 1;
            }
            succ.push(counts.into_iter().collect());
            i += 1;
        }
        BlockLift { len, sentinel, blocks, succ, start: 0 }
    }

    /// Exact counts |ζᵗ(e)|_w for every factor w of length ≤ `len`.
    pub fn factor_counts(&self, e: Letter, len: usize, t: usize) -> BTreeMap<Vec<Letter>, BigUint> {
        let lift = self.block_lift(e, len);
        let mut v = lift.initial();
        for _ in 0..t {
            v = lift.step(&v);
        }
        prefix_totals(&lift, &v)
    }

    /// |ζᵗ(e)|_w, counted on the block lift without writing out ζᵗ(e).
    pub fn iterate_counts(&self, e: Letter, w: &[Letter], t: usize) -> BigUint {
        if w.is_empty() {
            return self.lengths(t)[e as usize].clone();
        }
        let lift = self.block_lift(e, w.len());
        let mut v = lift.initial();
        for _ in 0..t {
            v = lift.step(&v);
        }
        lift.blocks.iter().zip(&v).filter(|(b, _)| b[..] == *w).map(|(_, x)| x.clone()).sum()
    }

    /// Occurrences of every length-`len` block in the cyclic word ζᵗ(w),
    /// read cyclically, carried on blocks without writing out ζᵗ(w).
    pub fn cyclic_block_counts(&self, w: &[Letter], len: usize, t: usize) -> BTreeMap<Vec<Letter>, BigUint> {
        let mut counts: BTreeMap<Vec<Letter>, BigUint> = BTreeMap::new();
        if w.is_empty() || len == 0 {
            return counts;
        }
        let n = w.len();
        for i in 0..n {
            let b: Vec<Letter> = (0..len).map(|j| w[(i + j) % n]).collect();
            *counts.entry(b).or_default() += 1u32;
        }
        let mut lifts: HashMap<Vec<Letter>, Vec<Vec<Letter>>> = HashMap::new();
        for _ in 0..t {
            let mut next: BTreeMap<Vec<Letter>, BigUint> = BTreeMap::new();
            for (b, c) in &counts {
                let lift = lifts.entry(b.clone()).or_insert_with(|| {
                    let word: Vec<Letter> = b.iter().flat_map(|&x| self.images[x as usize].iter().copied()).collect();
                    (0..self.images[b[0] as usize].len()).map(|i| word[i..i + len].to_vec()).collect()
                });
                for nb in lift.iter() {
                    *next.entry(nb.clone()).or_default() += c;
                }
            }
            counts = next;
        }
        counts
    }

    /// |ζᵗ(x)| for every letter.
    pub fn lengths(&self, t: usize) -> Vec<BigUint> {
        let mut l = vec![BigUint::from(1u32); self.alphabet_len()];
        for _ in 0..t {
            l = self.images.iter().map(|img| img.iter().map(|&y| &l[y as usize]).sum()).collect();
        }
        l
    }

    /// lim |ζᵗ(e)|_γ / |ζᵗ(e)| over factors γ with |γ| ≤ radius, iterating
    /// the power of ζ that makes the block lift aperiodic until successive
    /// vectors differ by less than `tol` in the max norm.
    pub fn limit_frequencies(&self, e: Letter, radius: usize, tol: f64, max_iter: usize) -> Result<FrequencyVector> {
        if !self.is_expanding() {
            return Err(Error::Precondition("substitution is not expanding".into()));
        }
        let lift = self.block_lift(e, radius.max(1));
        let p = lift.period();
        let mut v = lift.initial();
        let mut prev: Option<BTreeMap<Vec<Letter>, f64>> = None;
        let mut calm = 0;
        for it in 1..=max_iter {
            for _ in 0..p {
                v = lift.step(&v);
            }
            let counts = prefix_totals(&lift, &v);
            let total: BigUint = counts.iter().filter(|(k, _)| k.len() == 1).map(|(_, x)| x.clone()).sum();
            let cur: BTreeMap<Vec<Letter>, f64> =
                counts.into_iter().map(|(k, x)| (k, ratio_f64(&x, &total))).collect();
            if let Some(prev) = &prev {
                // Windows meeting either end of ζᵗ(e) must also be negligible.
                let edge_effect = radius as f64 / total.to_f64().unwrap_or(f64::INFINITY);
                calm = if max_diff(prev, &cur) < tol && edge_effect < tol { calm + 1 } else { 0 };
                if calm >= SETTLE {
                    return Ok(FrequencyVector { radius, basepoint: e, values: cur, power: p, iterations: it, tol });
                }
            }
            prev = Some(cur);
        }
        Err(Error::NoConvergence(format!(
            "frequencies from {} not settled after {max_iter} steps of power {p}",
            self.names[e as usize]
        )))
    }

    /// lim |ζ^(t+1)(e)| / |ζᵗ(e)|, measured over the aperiodic power p as
    /// (|ζ^(t+p)(e)| / |ζᵗ(e)|)^(1/p).
    pub fn stretch_factor(&self, e: Letter, tol: f64, max_iter: usize) -> Result<f64> {
        let p = self.block_lift(e, 1).period();
        let mut l = vec![BigUint::from(1u32); self.alphabet_len()];
        let step = |l: &[BigUint]| -> Vec<BigUint> {
            self.images.iter().map(|img| img.iter().map(|&y| &l[y as usize]).sum()).collect()
        };
        let mut prev: Option<f64> = None;
        let mut calm = 0;
        for _ in 0..max_iter {
            let mut next = l.clone();
            for _ in 0..p {
                next = step(&next);
            }
            let r = ratio_f64(&next[e as usize], &l[e as usize]).powf(1.0 / p as f64);
            if let Some(q) = prev {
                calm = if (r - q).abs() < tol { calm + 1 } else { 0 };
                if calm >= SETTLE {
                    return Ok(r);
                }
            }
            prev = Some(r);
            l = next;
        }
        Err(Error::NoConvergence(format!(
            "length ratio of {} not settled after {max_iter} steps",
            self.names[e as usize]
        )))
    }
}

fn max_diff(a: &BTreeMap<Vec<Letter>, f64>, b: &BTreeMap<Vec<Letter>, f64>) -> f64 {
    let get = |m: &BTreeMap<Vec<Letter>, f64>, k: &Vec<Letter>| m.get(k).copied().unwrap_or(0.0);
    a.keys().chain(b.keys()).map(|k| (get(a, k) - get(b, k)).abs()).fold(0.0, f64::max)
}

/// Occurrence counts of every sentinel-free prefix of the lift's blocks.
fn prefix_totals(lift: &BlockLift, v: &[BigUint]) -> BTreeMap<Vec<Letter>, BigUint> {
    let mut out: BTreeMap<Vec<Letter>, BigUint> = BTreeMap::new();
    for (b, x) in lift.blocks.iter().zip(v) {
        if x.is_zero() {
            continue;
        }
        for l in 1..=lift.len {
            if b[l - 1] == lift.sentinel {
                break;
            }
            *out.entry(b[..l].to_vec()).or_default() += x;
        }
    }
    out
}
