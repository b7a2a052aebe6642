//! Closed Nielsen loops, the multi-INP bound A(f) and a search for periodic
//! conjugacy classes.

use serde::Serialize;

use super::{InpSearch, NielsenPath, Point, TrainTrack};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::graph::{enumerate_cyclic_words, CyclicWord};
use crate::map::{crossed_turn, GraphMap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicClass {
    pub word: CyclicWord,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hyperbolicity {
    pub verdict: Verdict,
    pub witness: Option<String>,
}

impl TrainTrack {
    /// Whether oriented η may be followed by oriented ζ in a legal
    /// concatenation.
    pub fn nielsen_follows(&self, eta: &NielsenPath, zeta: &NielsenPath) -> bool {
        let g = self.graph();
        let p = eta.end_point(g);
        if p != zeta.start_point(g) {
            return false;
        }
        match p {
            Point::Interior { .. } => eta.arrive() == zeta.depart(),
            Point::Vertex(_) => self.is_legal_turn(crossed_turn(eta.arrive(), zeta.depart())),
        }
    }

    /// A cyclic legal concatenation of INPs, if one exists.
    pub fn closed_nielsen_loop(&self, inps: &[NielsenPath]) -> Option<Vec<NielsenPath>> {
        let oriented: Vec<NielsenPath> = inps.iter().flat_map(|e| [e.clone(), e.reversed()]).collect();
        let n = oriented.len();
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| self.nielsen_follows(&oriented[i], &oriented[j])).collect())
            .collect();
        let mut color = vec![0u8; n];
        let mut stack_path: Vec<usize> = Vec::new();
        fn dfs(u: usize, adj: &[Vec<usize>], color: &mut [u8], path: &mut Vec<usize>) -> Option<Vec<usize>> {
            color[u] = 1;
            path.push(u);
            for &v in &adj[u] {
                if color[v] == 1 {
                    let at = path.iter().position(|&x| x == v).unwrap();
                    return Some(path[at..].to_vec());
                }
                if color[v] == 0 {
                    if let Some(c) = dfs(v, adj, color, path) {
                        return Some(c);
                    }
                }
            }
            path.pop();
            color[u] = 2;
            None
        }
        for s in 0..n {
            if color[s] == 0 {
                if let Some(c) = dfs(s, &adj, &mut color, &mut stack_path) {
                    return Some(c.into_iter().map(|i| oriented[i].clone()).collect());
                }
            }
        }
        None
    }

    /// A(f) = 2·#INPs, or a closed Nielsen loop as a non-hyperbolicity
    /// witness.
    pub fn multi_inp_bound(&self, search: &InpSearch) -> Result<usize> {
        if let Some(lp) = self.closed_nielsen_loop(&search.inps) {
            let g = self.graph();
            let parts: Vec<String> = lp.iter().map(|e| e.display(g)).collect();
            return Err(Error::NotHyperbolic(format!("closed Nielsen loop {}", parts.join(" ; "))));
        }
        Ok(2 * search.inps.len())
    }

    /// Combined verdict from the Nielsen-loop check, unresolved INP
    /// candidates and a periodic conjugacy search on the supplied map.
    pub fn hyperbolicity(&self, search: &InpSearch, max_len: usize, max_k: usize, mode: ExecMode) -> Hyperbolicity {
        if let Err(Error::NotHyperbolic(w)) = self.multi_inp_bound(search) {
            return Hyperbolicity { verdict: Verdict::Fail, witness: Some(w) };
        }
        if let Some(p) = periodic_conjugacy_search(self.base(), max_len, max_k, mode) {
            return Hyperbolicity {
                verdict: Verdict::Fail,
                witness: Some(format!("[{}] is fixed by the power {}", p.word.display(self.graph()), p.k)),
            };
        }
        if !search.unresolved.is_empty() {
            return Hyperbolicity {
                verdict: Verdict::Unresolved,
                witness: Some(format!("{} unresolved INP candidates", search.unresolved.len())),
            };
        }
        Hyperbolicity { verdict: Verdict::Pass, witness: None }
    }
}

/// Least (length, word, k) with [fᵏ(w)] = [w] over canonical cyclic words of
/// length ≤ `max_len` and 1 ≤ k ≤ `max_k`.
pub fn periodic_conjugacy_search(f: &GraphMap, max_len: usize, max_k: usize, mode: ExecMode) -> Option<PeriodicClass> {
    let g = f.graph();
    for n in 1..=max_len {
        let words = enumerate_cyclic_words(g, n);
        let hits = mode.map(&words, |w| {
            let mut x = w.clone();
            for k in 1..=max_k {
                x = f.apply_cyclic(&x);
                if x.is_conjugate(w) {
                    return Some(k);
                }
            }
            None
        });
        if let Some((w, k)) = words.iter().zip(hits).find_map(|(w, h)| h.map(|k| (w, k))) {
            return Some(PeriodicClass { word: w.clone(), k });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn fibonacci_is_flagged() {
        let f = fib();
        let s = f.find_inps();
        assert!(matches!(f.multi_inp_bound(&s), Err(Error::NotHyperbolic(_))));
        let lp = f.closed_nielsen_loop(&s.inps).unwrap();
        assert_eq!(lp.len(), 1);
        // The commutator class is periodic under the base map.
        let p = periodic_conjugacy_search(f.base(), 4, 2, ExecMode::Sequential).unwrap();
        assert_eq!((p.word.len(), p.k), (4, 2));
        let g = f.graph();
        let comm = CyclicWord::new(g, g.parse_word("abAB").unwrap()).unwrap();
        let img = f.base().apply_cyclic(&comm);
        assert!(img.is_conjugate(&comm.inverse()));
        assert!(f.base().apply_cyclic(&img).is_conjugate(&comm));
    }

    #[test]
    fn inverse_fibonacci_loop_has_two_inps() {
        let f = fib_inv();
        let s = f.find_inps();
        assert_eq!(s.inps.len(), 2);
        assert_eq!(f.closed_nielsen_loop(&s.inps).unwrap().len(), 2);
    }

    #[test]
    fn plastic_pair_is_hyperbolic() {
        for f in [plastic(), plastic_inv()] {
            let s = f.find_inps();
            assert_eq!(f.multi_inp_bound(&s).unwrap(), 2 * s.inps.len());
            let h = f.hyperbolicity(&s, 5, 3, ExecMode::Sequential);
            assert_eq!(h.verdict, Verdict::Pass);
        }
    }

    #[test]
    fn no_inps_gives_zero() {
        let f = plastic();
        let s = InpSearch {
            inps: vec![],
            pre_inps: vec![],
            unresolved: vec![],
            window: 1,
            pairs: 0,
            states: 0,
            stabilization: 1,
            period_bound: 1,
        };
        assert_eq!(f.multi_inp_bound(&s).unwrap(), 0);
    }

    #[test]
    fn parallel_search_matches_sequential() {
        let f = fib();
        let a = periodic_conjugacy_search(f.base(), 5, 3, ExecMode::Sequential);
        let b = periodic_conjugacy_search(f.base(), 5, 3, ExecMode::Parallel);
        assert_eq!(a, b);
    }
}
