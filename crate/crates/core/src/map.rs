//! Graph self-maps: images, powers, derivative and turn dynamics, train
//! track and expansion checks, and the cancellation bound.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{inv, is_reduced, reduce, CyclicWord, cyclic_reduce_word, Edge, EdgePath, Graph, Vertex};

/// Default cap on materialized image lengths.
pub const DEFAULT_LENGTH_BUDGET: usize = 10_000_000;

/// A regular graph map f: Γ → Γ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphMap {
    graph: Graph,
    vertex_image: Vec<Vertex>,
    images: Vec<Vec<Edge>>,
}

/// Unordered pair of directions at a common vertex, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Turn(pub Edge, pub Edge);

impl Turn {
    pub fn new(a: Edge, b: Edge) -> Turn {
        if a <= b {
            Turn(a, b)
        } else {
            Turn(b, a)
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.0 == self.1
    }

    pub fn display(&self, g: &Graph) -> String {
        format!("{{{}, {}}}", g.edge_name(self.0), g.edge_name(self.1))
    }
}

/// The turn crossed between consecutive edges `a` then `b`.
pub fn crossed_turn(a: Edge, b: Edge) -> Turn {
    Turn::new(inv(a), b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TurnClassification {
    /// Gate index of every direction: directions are in the same gate iff
    /// some iterate of Df identifies them.
    pub gate: Vec<usize>,
    pub illegal_turns: Vec<Turn>,
}

impl TurnClassification {
    pub fn is_legal(&self, t: Turn) -> bool {
        t.0 != t.1 && self.gate[t.0 as usize] != self.gate[t.1 as usize]
    }

    pub fn is_illegal(&self, t: Turn) -> bool {
        !self.is_legal(t)
    }

    /// Legal at every junction (which includes reducedness).
    pub fn is_legal_path(&self, w: &[Edge]) -> bool {
        w.windows(2).all(|p| self.is_legal(crossed_turn(p[0], p[1])))
    }

    pub fn gates(&self) -> Vec<Vec<Edge>> {
        let n = self.gate.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); n];
        for (d, &g) in self.gate.iter().enumerate() {
            out[g].push(d as Edge);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrainTrackCheck {
    pub train_track: bool,
    /// Offending edge and the illegal turn crossed by its image.
    pub witness: Option<(Edge, Turn)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpansionBounds {
    pub lambda_min: u64,
    pub lambda_max: u64,
}

impl GraphMap {
    /// Builds a map from the images of the positive edges, in edge order.
    /// Vertex images are inferred and checked for consistency.
    pub fn new(graph: Graph, positive_images: Vec<Vec<Edge>>) -> Result<GraphMap> {
        let n = graph.num_edges() / 2;
        if positive_images.len() != n {
            return Err(Error::NotRegular(format!("expected {n} edge images, got {}", positive_images.len())));
        }
        let mut images = Vec::with_capacity(2 * n);
        for (i, img) in positive_images.into_iter().enumerate() {
            let e = 2 * i as Edge;
            let name = graph.edge_name(e);
            if img.is_empty() {
                return Err(Error::NotRegular(format!("image of {name} is trivial")));
            }
            graph.check_composable(&img).map_err(|_| {
                Error::NotRegular(format!("image of {name} is not a composable path"))
            })?;
            if !is_reduced(&img) {
                return Err(Error::NotRegular(format!(
                    "image of {name} ({}) is not reduced",
                    graph.format_word(&img)
                )));
            }
            let bar = crate::graph::inverse_word(&img);
            images.push(img);
            images.push(bar);
        }
        let mut vertex_image: Vec<Option<Vertex>> = vec![None; graph.num_vertices()];
        for e in graph.edges() {
            let v = graph.origin(e) as usize;
            let w = graph.origin(images[e as usize][0]);
            match vertex_image[v] {
                None => vertex_image[v] = Some(w),
                Some(x) if x != w => {
                    return Err(Error::NotRegular(format!(
                        "images of edges at vertex {} start at different vertices",
                        graph.vertex_name(v as Vertex)
                    )))
                }
                _ => {}
            }
        }
        let vertex_image = vertex_image.into_iter().map(|v| v.unwrap_or(0)).collect();
        Ok(GraphMap { graph, vertex_image, images })
    }

    pub fn identity(graph: Graph) -> GraphMap {
        let images = graph.edges().map(|e| vec![e]).collect();
        let vertex_image = (0..graph.num_vertices() as Vertex).collect();
        GraphMap { graph, vertex_image, images }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn image(&self, e: Edge) -> &[Edge] {
        &self.images[e as usize]
    }

    pub fn vertex_image(&self, v: Vertex) -> Vertex {
        self.vertex_image[v as usize]
    }

    /// f(p) as a concatenation of edge images, unreduced.
    pub fn apply(&self, w: &[Edge]) -> Vec<Edge> {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &e in w {
            out.extend_from_slice(&self.images[e as usize]);
        }
        out
    }

    pub fn apply_path(&self, p: &EdgePath) -> EdgePath {
        EdgePath { start: self.vertex_image(p.start), edges: self.apply(&p.edges) }
    }

    /// [f(p)].
    pub fn apply_reduced(&self, w: &[Edge]) -> Vec<Edge> {
        reduce(&self.apply(w))
    }

    /// [f(w)] for a loop, cyclically reduced.
    pub fn apply_cyclic(&self, w: &CyclicWord) -> CyclicWord {
        let out = cyclic_reduce_word(&self.apply(w.edges()));
        CyclicWord::new(&self.graph, out).expect("image of a loop is a loop")
    }

    /// Image lengths |f(e)| for all oriented edges.
    pub fn lengths(&self) -> Vec<usize> {
        self.images.iter().map(|i| i.len()).collect()
    }

    /// Exact |fᵏ(e)| for all oriented edges (unreduced images of images).
    pub fn power_lengths(&self, k: usize) -> Vec<BigUint> {
        let mut len: Vec<BigUint> = vec![BigUint::one(); self.images.len()];
        for _ in 0..k {
            len = self
                .images
                .iter()
                .map(|img| img.iter().fold(BigUint::zero(), |acc, &x| acc + &len[x as usize]))
                .collect();
        }
        len
    }

    /// fᵏ by iterated substitution, reducing after each step.
    pub fn power(&self, k: usize, budget: usize) -> Result<GraphMap> {
        if k == 0 {
            return Ok(GraphMap::identity(self.graph.clone()));
        }
        let longest = self.power_lengths(k).into_iter().max().unwrap_or_default();
        if longest > BigUint::from(budget) {
            return Err(Error::LengthBudget { len: longest.to_string(), budget });
        }
        let mut cur = self.clone();
        for _ in 1..k {
            cur = self.compose(&cur);
        }
        Ok(cur)
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &GraphMap) -> GraphMap {
        let images = other.images.iter().map(|img| self.apply_reduced(img)).collect();
        let vertex_image = other.vertex_image.iter().map(|&v| self.vertex_image(v)).collect();
        GraphMap { graph: self.graph.clone(), vertex_image, images }
    }

    /// The derivative map Df: direction e ↦ first edge of f(e).
    pub fn direction_map(&self) -> Vec<Edge> {
        self.images.iter().map(|img| img[0]).collect()
    }

    /// Gates from the eventual identification partition of Df.
    pub fn classify_turns(&self) -> TurnClassification {
        let df = self.direction_map();
        let m = df.len();
        // Iterate to Dfⁿ with n ≥ m: the identification partition is stable from then on.
        let mut img: Vec<Edge> = (0..m as Edge).collect();
        for _ in 0..m {
            img = img.iter().map(|&d| df[d as usize]).collect();
        }
        let mut label: HashMap<Edge, usize> = HashMap::new();
        let mut gate = Vec::with_capacity(m);
        for &d in &img {
            let next = label.len();
            gate.push(*label.entry(d).or_insert(next));
        }
        let mut illegal_turns = Vec::new();
        for a in 0..m as Edge {
            for b in a + 1..m as Edge {
                if self.graph.origin(a) == self.graph.origin(b) && gate[a as usize] == gate[b as usize] {
                    illegal_turns.push(Turn(a, b));
                }
            }
        }
        TurnClassification { gate, illegal_turns }
    }

    pub fn is_train_track(&self) -> TrainTrackCheck {
        let turns = self.classify_turns();
        for e in self.graph.positive_edges() {
            for p in self.image(e).windows(2) {
                let t = crossed_turn(p[0], p[1]);
                if turns.is_illegal(t) {
                    return TrainTrackCheck { train_track: false, witness: Some((e, t)) };
                }
            }
        }
        TrainTrackCheck { train_track: true, witness: None }
    }

    pub fn expansion_bounds(&self) -> Result<ExpansionBounds> {
        let mut lo = u64::MAX;
        let mut hi = 0;
        for e in self.graph.positive_edges() {
            let l = self.image(e).len() as u64;
            if l < 2 {
                return Err(Error::NotExpanding(self.graph.edge_name(e)));
            }
            lo = lo.min(l);
            hi = hi.max(l);
        }
        Ok(ExpansionBounds { lambda_min: lo, lambda_max: hi })
    }

    /// Least power at which every edge image has length ≥ 2, after
    /// contracting an invariant forest of never-expanded edges if needed.
    pub fn make_expanding(&self, max_power: usize) -> Result<(GraphMap, usize)> {
        let stuck = self.never_expanded();
        if !stuck.is_empty() {
            let quotient = self.contract_forest(&stuck)?;
            return quotient.make_expanding(max_power);
        }
        let two = BigUint::from(2u32);
        let mut len: Vec<BigUint> = vec![BigUint::one(); self.images.len()];
        for k in 1..=max_power {
            len = self
                .images
                .iter()
                .map(|img| img.iter().fold(BigUint::zero(), |acc, &x| acc + &len[x as usize]))
                .collect();
            if len.iter().all(|l| *l >= two) {
                return Ok((self.power(k, DEFAULT_LENGTH_BUDGET)?, k));
            }
        }
        Err(Error::MaxPowerExceeded(max_power))
    }

    /// Positive edges whose every iterate image is a single edge: the largest
    /// f-invariant set of edges mapped to single edges of the set.
    fn never_expanded(&self) -> Vec<Edge> {
        let mut inside: Vec<bool> = self.graph.positive_edges().map(|e| self.image(e).len() == 1).collect();
        loop {
            let mut changed = false;
            for e in self.graph.positive_edges() {
                let i = (e / 2) as usize;
                if inside[i] {
                    let target = (self.image(e)[0] / 2) as usize;
                    if !inside[target] {
                        inside[i] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self.graph.positive_edges().filter(|&e| inside[(e / 2) as usize]).collect()
    }

    fn contract_forest(&self, forest: &[Edge]) -> Result<GraphMap> {
        let g = &self.graph;
        let mut parent: Vec<usize> = (0..g.num_vertices()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let n = p[c];
                p[c] = r;
                c = n;
            }
            r
        }
        for &e in forest {
            let a = find(&mut parent, g.origin(e) as usize);
            let b = find(&mut parent, g.terminus(e) as usize);
            if a == b {
                let names: Vec<String> = forest.iter().map(|&x| g.edge_name(x)).collect();
                return Err(Error::InvariantLoop(names.join(", ")));
            }
            parent[a] = b;
        }
        let mut class: HashMap<usize, Vertex> = HashMap::new();
        let mut vertex_names = Vec::new();
        let mut vclass = vec![0; g.num_vertices()];
        for v in 0..g.num_vertices() {
            let r = find(&mut parent, v);
            let next = class.len() as Vertex;
            let id = *class.entry(r).or_insert_with(|| {
                vertex_names.push(g.vertex_name(r as Vertex).to_string());
                next
            });
            vclass[v] = id;
        }
        let removed: Vec<bool> = g.edges().map(|e| forest.contains(&(e & !1))).collect();
        let mut new_id: Vec<Option<Edge>> = vec![None; g.num_edges()];
        let mut edges = Vec::new();
        for e in g.positive_edges() {
            if !removed[e as usize] {
                let id = 2 * edges.len() as Edge;
                new_id[e as usize] = Some(id);
                new_id[inv(e) as usize] = Some(id + 1);
                edges.push((g.edge_name(e), vclass[g.origin(e) as usize], vclass[g.terminus(e) as usize]));
            }
        }
        let graph = Graph::new(vertex_names, edges)?;
        let mut images = Vec::new();
        for e in self.graph.positive_edges() {
            if removed[e as usize] {
                continue;
            }
            let img: Vec<Edge> = self.image(e).iter().filter_map(|&x| new_id[x as usize]).collect();
            images.push(reduce(&img));
        }
        GraphMap::new(graph, images)
    }

    /// The cancellation bound C(f): maximal length of the common prefix of
    /// f(γ) and f(γ′) over legal γ, γ′ with common origin and distinct first
    /// edges. Exact, by longest paths in the finite comparison automaton whose
    /// state is the pair of positions currently compared in the two images.
    pub fn cancellation_bound(&self) -> Result<u64> {
        let check = self.is_train_track();
        if !check.train_track {
            let (e, t) = check.witness.unwrap();
            return Err(Error::NotTrainTrack { edge: self.graph.edge_name(e), turn: t.display(&self.graph) });
        }
        let turns = self.classify_turns();
        let cont = self.legal_continuations(&turns);
        let mut memo: HashMap<(Edge, usize, Edge, usize), u64> = HashMap::new();
        let mut on_stack: HashMap<(Edge, usize, Edge, usize), ()> = HashMap::new();
        let mut best = 0;
        for t in &turns.illegal_turns {
            let v = self.longest_match((t.0, 0, t.1, 0), &cont, &mut memo, &mut on_stack)?;
            best = best.max(v);
        }
        Ok(best)
    }

    /// Legal one-edge continuations of each oriented edge.
    pub(crate) fn legal_continuations(&self, turns: &TurnClassification) -> Vec<Vec<Edge>> {
        self.graph
            .edges()
            .map(|g| {
                self.graph
                    .directions_at(self.graph.terminus(g))
                    .into_iter()
                    .filter(|&h| turns.is_legal(crossed_turn(g, h)))
                    .collect()
            })
            .collect()
    }

    fn longest_match(
        &self,
        s: (Edge, usize, Edge, usize),
        cont: &[Vec<Edge>],
        memo: &mut HashMap<(Edge, usize, Edge, usize), u64>,
        on_stack: &mut HashMap<(Edge, usize, Edge, usize), ()>,
    ) -> Result<u64> {
        let (g, i, h, j) = s;
        if self.images[g as usize][i] != self.images[h as usize][j] {
            return Ok(0);
        }
        if let Some(&v) = memo.get(&s) {
            return Ok(v);
        }
        if on_stack.insert(s, ()).is_some() {
            return Err(Error::UnboundedCancellation);
        }
        let left: Vec<(Edge, usize)> = if i + 1 < self.images[g as usize].len() {
            vec![(g, i + 1)]
        } else {
            cont[g as usize].iter().map(|&x| (x, 0)).collect()
        };
        let right: Vec<(Edge, usize)> = if j + 1 < self.images[h as usize].len() {
            vec![(h, j + 1)]
        } else {
            cont[h as usize].iter().map(|&x| (x, 0)).collect()
        };
        let mut best = 0;
        for &(g2, i2) in &left {
            for &(h2, j2) in &right {
                best = best.max(self.longest_match((g2, i2, h2, j2), cont, memo, on_stack)?);
            }
        }
        on_stack.remove(&s);
        memo.insert(s, best + 1);
        Ok(best + 1)
    }

    /// Transition matrix: unoriented M[e′][e] = |f(e)|_{e′} + |f(e)|_{ē′}
    /// over positive edges, or oriented M[x][y] = |f(y)|_x over all edges.
    pub fn transition_matrix(&self, oriented: bool) -> Vec<Vec<u64>> {
        if oriented {
            let m = self.images.len();
            let mut out = vec![vec![0u64; m]; m];
            for (y, img) in self.images.iter().enumerate() {
                for &x in img {
                    out[x as usize][y] += 1;
                }
            }
            out
        } else {
            let n = self.images.len() / 2;
            let mut out = vec![vec![0u64; n]; n];
            for y in 0..n {
                for &x in &self.images[2 * y] {
                    out[(x / 2) as usize][y] += 1;
                }
            }
            out
        }
    }

    /// Display helper: `a -> ab; b -> a`.
    pub fn display(&self) -> String {
        self.graph
            .positive_edges()
            .map(|e| format!("{} -> {}", self.graph.edge_name(e), self.graph.format_word(self.image(e))))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Convenience for small values that fit a machine word.
pub fn big_to_u64(x: &BigUint) -> Option<u64> {
    x.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    pub(crate) fn rose_map(names: &[&str], images: &[&str]) -> GraphMap {
        let g = Graph::rose(names).unwrap();
        let imgs = images.iter().map(|s| g.parse_word(s).unwrap()).collect();
        GraphMap::new(g, imgs).unwrap()
    }

    fn fib() -> GraphMap {
        rose_map(&["a", "b"], &["ab", "a"])
    }

    // Truncated images f(p) of legal paths p starting with d, extended until
    // the image has at least k letters or p cannot be extended legally.
    fn image_prefixes(f: &GraphMap, turns: &TurnClassification, d: Edge, k: usize) -> HashSet<Vec<Edge>> {
        let mut out = HashSet::new();
        let mut stack = vec![vec![d]];
        while let Some(p) = stack.pop() {
            let mut img = f.apply(&p);
            let last = *p.last().unwrap();
            let next: Vec<Edge> = f
                .graph()
                .directions_at(f.graph().terminus(last))
                .into_iter()
                .filter(|&h| turns.is_legal(crossed_turn(last, h)))
                .collect();
            if img.len() >= k || next.is_empty() {
                img.truncate(k);
                out.insert(img);
                continue;
            }
            for h in next {
                let mut q = p.clone();
                q.push(h);
                stack.push(q);
            }
        }
        out
    }

    fn brute_force_cancellation(f: &GraphMap, k: usize) -> u64 {
        let turns = f.classify_turns();
        let mut best = 0;
        for a in f.graph().edges() {
            for b in f.graph().edges() {
                if a == b || f.graph().origin(a) != f.graph().origin(b) {
                    continue;
                }
                let pa = image_prefixes(f, &turns, a, k);
                let pb = image_prefixes(f, &turns, b, k);
                for p in &pa {
                    for q in &pb {
                        let c = p.iter().zip(q).take_while(|(x, y)| x == y).count() as u64;
                        best = best.max(c);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn apply_examples() {
        let f = fib();
        let g = f.graph().clone();
        assert_eq!(f.apply(&g.parse_word("ab").unwrap()), g.parse_word("aba").unwrap());
        assert_eq!(f.apply_reduced(&g.parse_word("bA").unwrap()), g.parse_word("aBA").unwrap());
        let t = f.apply_path(&EdgePath::trivial(0));
        assert!(t.is_empty() && t.start == 0);
    }

    #[test]
    fn power_examples() {
        let f = fib();
        let g = f.graph().clone();
        let f2 = f.power(2, 1000).unwrap();
        assert_eq!(f2.image(0), &g.parse_word("aba").unwrap()[..]);
        assert_eq!(f2.image(2), &g.parse_word("ab").unwrap()[..]);
        assert_eq!(f.power(1, 1000).unwrap(), f);
        assert_eq!(f.power_lengths(3)[0], BigUint::from(5u32));
        assert!(matches!(f.power(40, 1000), Err(Error::LengthBudget { .. })));
    }

    #[test]
    fn turn_classification_examples() {
        let f = fib();
        let t = f.classify_turns();
        assert_eq!(t.illegal_turns, vec![Turn(0, 2)]);
        let id = GraphMap::identity(Graph::rose(&["a", "b"]).unwrap());
        assert!(id.classify_turns().illegal_turns.is_empty());
        // Plastic map: exhaustive orbit check of every unordered pair.
        let p = rose_map(&["a", "b", "c"], &["b", "c", "ab"]);
        let tc = p.classify_turns();
        let df = p.direction_map();
        for a in 0..6u32 {
            for b in a + 1..6 {
                let (mut x, mut y) = (a, b);
                let mut met = false;
                for _ in 0..100 {
                    if x == y {
                        met = true;
                        break;
                    }
                    x = df[x as usize];
                    y = df[y as usize];
                }
                assert_eq!(tc.is_illegal(Turn(a, b)), met, "turn {a},{b}");
            }
        }
        assert_eq!(tc.illegal_turns, vec![Turn(1, 5)]);
    }

    #[test]
    fn train_track_examples() {
        assert!(fib().is_train_track().train_track);
        let bad = rose_map(&["a", "b"], &["aB", "a"]);
        let c = bad.is_train_track();
        assert!(!c.train_track);
        assert_eq!(c.witness, Some((0, Turn(1, 3))));
        let perm = rose_map(&["a", "b"], &["b", "a"]);
        assert!(perm.is_train_track().train_track);
    }

    #[test]
    fn expansion_examples() {
        let f2 = fib().power(2, 100).unwrap();
        assert_eq!(f2.expansion_bounds().unwrap(), ExpansionBounds { lambda_min: 2, lambda_max: 3 });
        assert_eq!(fib().expansion_bounds(), Err(Error::NotExpanding("b".into())));
        let (m, k) = fib().make_expanding(10).unwrap();
        assert_eq!((m, k), (f2, 2));
        let already = rose_map(&["a", "b"], &["ab", "ba"]);
        assert_eq!(already.make_expanding(5).unwrap().1, 1);
        let stuck = rose_map(&["a", "c"], &["aca", "c"]);
        assert!(matches!(stuck.make_expanding(5), Err(Error::InvariantLoop(_))));
    }

    #[test]
    fn forest_contraction() {
        // A non-loop edge fixed by f is contracted, leaving a rose.
        let g = Graph::new(
            vec!["u".into(), "v".into()],
            vec![("a".into(), 0, 0), ("b".into(), 1, 1), ("c".into(), 0, 1)],
        )
        .unwrap();
        let imgs = ["a c b C", "b C a c b", "c"].iter().map(|s| g.parse_word(s).unwrap()).collect();
        let f = GraphMap::new(g, imgs).unwrap();
        let (q, k) = f.make_expanding(5).unwrap();
        assert_eq!(k, 1);
        assert!(q.graph().is_rose());
        assert_eq!(q.display(), "a -> ab; b -> bab");
    }

    #[test]
    fn cancellation_matches_brute_force() {
        let cases = [
            rose_map(&["a", "b"], &["aba", "ab"]),
            rose_map(&["a", "b"], &["ab", "a"]),
            rose_map(&["a", "b", "c"], &["b", "c", "ab"]).power(3, 100).unwrap(),
            rose_map(&["a", "b", "c"], &["cA", "a", "b"]).power(3, 100).unwrap(),
        ];
        for f in cases {
            let c = f.cancellation_bound().unwrap();
            let brute = brute_force_cancellation(&f, c as usize + 3);
            assert_eq!(c, brute, "{}", f.display());
        }
        // The 2-rose map a ↦ aba, b ↦ ab cancels three edges on ā·b.
        assert_eq!(rose_map(&["a", "b"], &["aba", "ab"]).cancellation_bound().unwrap(), 3);
    }

    #[test]
    fn cancellation_rejects_non_train_track() {
        assert!(matches!(
            rose_map(&["a", "b"], &["aB", "a"]).cancellation_bound(),
            Err(Error::NotTrainTrack { .. })
        ));
    }

    #[test]
    fn transition_matrices() {
        assert_eq!(fib().transition_matrix(false), vec![vec![1, 1], vec![1, 0]]);
        let p = rose_map(&["a", "b", "c"], &["b", "c", "ab"]);
        assert_eq!(p.transition_matrix(false), vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]]);
        let perm = rose_map(&["a", "b"], &["b", "a"]);
        assert_eq!(perm.transition_matrix(false), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn irregular_maps_rejected() {
        let g = Graph::rose(&["a", "b"]).unwrap();
        let imgs = vec![g.parse_word("aAb").unwrap(), g.parse_word("a").unwrap()];
        assert!(matches!(GraphMap::new(g, imgs), Err(Error::NotRegular(_))));
    }
}
