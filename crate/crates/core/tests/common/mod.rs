//! Test-side oracles. Everything here works on raw edge words (edge 2i is
//! the i-th letter, 2i+1 its inverse) and uses the library only to read
//! fixture files and edge images.
#![allow(dead_code)]

use std::path::PathBuf;

use freetrack::dsl::parse_map_file;
use freetrack::map::GraphMap;
use freetrack::tt::TrainTrack;

pub const FIXTURES: [&str; 6] = ["fib", "fib_inv", "plastic", "plastic_inv", "wedge", "wedge_inv"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn load_map(name: &str) -> GraphMap {
    let text = std::fs::read_to_string(fixture_path(&format!("{name}.map"))).unwrap();
    parse_map_file(&text).unwrap().map
}

pub fn load(name: &str) -> TrainTrack {
    TrainTrack::new(load_map(name), 16).unwrap()
}

pub fn reduce(w: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(w.len());
    for &e in w {
        if out.last() == Some(&(e ^ 1)) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[u32]) -> Vec<u32> {
    let mut w = reduce(w);
    while w.len() >= 2 && w[0] == w[w.len() - 1] ^ 1 {
        w = w[1..w.len() - 1].to_vec();
    }
    w
}

pub fn inverse(w: &[u32]) -> Vec<u32> {
    w.iter().rev().map(|e| e ^ 1).collect()
}

/// Least rotation, found by trying all of them.
pub fn canonical(w: &[u32]) -> Vec<u32> {
    (0..w.len().max(1))
        .map(|k| w[k.min(w.len())..].iter().chain(&w[..k.min(w.len())]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// f applied letter by letter without reduction.
pub fn expand(f: &GraphMap, w: &[u32]) -> Vec<u32> {
    w.iter().flat_map(|&e| f.image(e).iter().copied()).collect()
}

pub fn expand_iter(f: &GraphMap, w: &[u32], t: usize) -> Vec<u32> {
    (0..t).fold(w.to_vec(), |x, _| expand(f, &x))
}

pub fn apply_cyclic(f: &GraphMap, w: &[u32]) -> Vec<u32> {
    cyclic_reduce(&expand(f, w))
}

pub fn num_edges(f: &GraphMap) -> u32 {
    f.graph().num_edges() as u32
}

/// Legality of turns from the orbits of directions under Df.
pub struct Turns {
    illegal: Vec<Vec<bool>>,
}

impl Turns {
    pub fn new(f: &GraphMap) -> Turns {
        let n = num_edges(f) as usize;
        let df: Vec<usize> = (0..n as u32).map(|e| f.image(e)[0] as usize).collect();
        let mut illegal = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                let (mut x, mut y) = (a, b);
                for _ in 0..=n {
                    if x == y {
                        illegal[a][b] = true;
                        break;
                    }
                    x = df[x];
                    y = df[y];
                }
            }
        }
        Turns { illegal }
    }

    pub fn is_illegal(&self, a: u32, b: u32) -> bool {
        self.illegal[a as usize][b as usize]
    }

    /// Whether the junction …x · y… crosses an illegal turn.
    pub fn illegal_junction(&self, x: u32, y: u32) -> bool {
        self.is_illegal(x ^ 1, y)
    }

    pub fn is_legal_path(&self, w: &[u32]) -> bool {
        w.windows(2).all(|p| !self.illegal_junction(p[0], p[1]))
    }

    /// Illegal junction positions j of a loop, j between w[j−1] and w[j].
    pub fn junctions(&self, w: &[u32]) -> Vec<usize> {
        let n = w.len();
        (0..n).filter(|&j| self.illegal_junction(w[(j + n - 1) % n], w[j])).collect()
    }

    pub fn ilt(&self, w: &[u32]) -> usize {
        self.junctions(w).len()
    }

    /// Edges of a loop at distance at least `cutoff` from every illegal
    /// junction on both sides.
    pub fn good(&self, w: &[u32], cutoff: usize) -> usize {
        let n = w.len();
        let js = self.junctions(w);
        (0..n)
            .filter(|&i| js.iter().all(|&j| (i + n - j) % n >= cutoff && (j + n - 1 - i) % n >= cutoff))
            .count()
    }
}

pub fn lcp(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Largest cancellation between f(ᾱ) and f(β) over legal α, β of length at
/// most `max_len` with α·β reduced. A branch stops as soon as the images
/// differ, since longer paths only extend the images.
pub fn max_legal_cancellation(f: &GraphMap, turns: &Turns, max_len: usize) -> usize {
    let n = num_edges(f);
    let mut best = 0;
    let mut stack: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && f.graph().origin(a) == f.graph().origin(b) {
                stack.push((vec![a], vec![b]));
            }
        }
    }
    while let Some((p, q)) = stack.pop() {
        let fp = expand(f, &p);
        let fq = expand(f, &q);
        let c = lcp(&fp, &fq);
        best = best.max(c);
        if c < fp.len().min(fq.len()) {
            continue;
        }
        let grow_p = fp.len() <= fq.len();
        let side = if grow_p { &p } else { &q };
        if side.len() >= max_len {
            continue;
        }
        let last = *side.last().unwrap();
        for y in 0..n {
            if y != last ^ 1 && f.graph().origin(y) == f.graph().terminus(last) && !turns.illegal_junction(last, y) {
                let mut next = side.clone();
                next.push(y);
                stack.push(if grow_p { (next, q.clone()) } else { (p.clone(), next) });
            }
        }
    }
    best
}
