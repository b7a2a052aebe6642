//! Finite graphs with oriented edges, reduced edge paths and cyclic words.
//!
//! Oriented edges are small integers; the two orientations of a topological
//! edge are `2k` (the positive one) and `2k + 1`, so `ē = e ^ 1`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Edge = u32;
pub type Vertex = u32;

/// The reversed orientation ē of an oriented edge.
#[inline]
pub fn inv(e: Edge) -> Edge {
    e ^ 1
}

#[inline]
pub fn is_positive(e: Edge) -> bool {
    e & 1 == 0
}

/// Formal inverse of an edge sequence: reversed, every edge flipped.
pub fn inverse_word(w: &[Edge]) -> Vec<Edge> {
    w.iter().rev().map(|&e| inv(e)).collect()
}

/// A finite connected graph. Edge names are presentation only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    origin: Vec<Vertex>,
}

fn valid_edge_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_digit() || c == '_' || c == '\''),
        _ => false,
    }
}

fn capitalize(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    let mut chars = name.chars();
    if let Some(c) = chars.next() {
        out.push(c.to_ascii_uppercase());
    }
    out.extend(chars);
    out
}

impl Graph {
    /// A rose: one vertex `v` and one loop edge per name.
    pub fn rose<S: AsRef<str>>(names: &[S]) -> Result<Graph> {
        let edges = names.iter().map(|n| (n.as_ref().to_string(), 0, 0)).collect();
        Graph::new(vec!["v".to_string()], edges)
    }

    /// Builds a graph from vertex names and positive edges `(name, origin, terminus)`.
    pub fn new(vertex_names: Vec<String>, edges: Vec<(String, Vertex, Vertex)>) -> Result<Graph> {
        if vertex_names.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if edges.is_empty() {
            return Err(Error::InvalidGraph("no edges".into()));
        }
        let mut seen = HashMap::new();
        for (i, v) in vertex_names.iter().enumerate() {
            if seen.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{v}`")));
            }
        }
        let mut names = HashMap::new();
        let mut edge_names = Vec::with_capacity(edges.len());
        let mut origin = Vec::with_capacity(2 * edges.len());
        for (name, o, t) in edges {
            if !valid_edge_name(&name) {
                return Err(Error::InvalidGraph(format!(
                    "edge name `{name}` must start with a lowercase letter"
                )));
            }
            if names.insert(name.clone(), ()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge `{name}`")));
            }
            let n = vertex_names.len() as Vertex;
            if o >= n || t >= n {
                return Err(Error::InvalidGraph(format!("edge `{name}` has an unknown endpoint")));
            }
            edge_names.push(name);
            origin.push(o);
            origin.push(t);
        }
        let g = Graph { vertex_names, edge_names, origin };
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.num_vertices()];
        let mut stack = vec![0 as Vertex];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in self.directions_at(v) {
                let t = self.terminus(e) as usize;
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t as Vertex);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    /// Number of oriented edges |EΓ|.
    pub fn num_edges(&self) -> usize {
        self.origin.len()
    }

    pub fn rank(&self) -> usize {
        self.edge_names.len() + 1 - self.num_vertices()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> {
        0..self.num_edges() as Edge
    }

    pub fn positive_edges(&self) -> impl Iterator<Item = Edge> {
        (0..self.num_edges() as Edge).step_by(2)
    }

    pub fn origin(&self, e: Edge) -> Vertex {
        self.origin[e as usize]
    }

    pub fn terminus(&self, e: Edge) -> Vertex {
        self.origin[inv(e) as usize]
    }

    /// All oriented edges with origin `v`.
    pub fn directions_at(&self, v: Vertex) -> Vec<Edge> {
        self.edges().filter(|&e| self.origin(e) == v).collect()
    }

    pub fn is_rose(&self) -> bool {
        self.num_vertices() == 1
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        &self.vertex_names[v as usize]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<Vertex> {
        self.vertex_names.iter().position(|v| v == name).map(|i| i as Vertex)
    }

    pub fn edge_name(&self, e: Edge) -> String {
        let base = &self.edge_names[(e >> 1) as usize];
        if is_positive(e) {
            base.clone()
        } else {
            capitalize(base)
        }
    }

    pub fn edge_by_name(&self, name: &str) -> Option<Edge> {
        self.edge_names.iter().enumerate().find_map(|(i, n)| {
            if n == name {
                Some(2 * i as Edge)
            } else if capitalize(n) == name {
                Some(2 * i as Edge + 1)
            } else {
                None
            }
        })
    }

    fn single_letter_names(&self) -> bool {
        self.edge_names.iter().all(|n| n.len() == 1)
    }

    /// Parses a whitespace separated word; a token that is not an edge name
    /// is split greedily into edge names (`aBa` reads as a, b̄, a).
    pub fn parse_word(&self, text: &str) -> Result<Vec<Edge>> {
        let mut out = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == ',' || c == '.' || c == '·') {
            if token.is_empty() {
                continue;
            }
            if let Some(e) = self.edge_by_name(token) {
                out.push(e);
                continue;
            }
            let mut rest = token;
            while !rest.is_empty() {
                let hit = (1..=rest.len())
                    .rev()
                    .filter(|&k| rest.is_char_boundary(k))
                    .find_map(|k| self.edge_by_name(&rest[..k]).map(|e| (k, e)));
                match hit {
                    Some((k, e)) => {
                        out.push(e);
                        rest = &rest[k..];
                    }
                    None => {
                        let bad: String = rest.chars().take(1).collect();
                        return Err(Error::UnknownEdge(bad.to_lowercase()));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Letters concatenated when every name is a single letter, else space separated.
    pub fn format_word(&self, w: &[Edge]) -> String {
        let sep = if self.single_letter_names() { "" } else { " " };
        w.iter().map(|&e| self.edge_name(e)).collect::<Vec<_>>().join(sep)
    }

    pub fn check_composable(&self, w: &[Edge]) -> Result<()> {
        for (i, pair) in w.windows(2).enumerate() {
            if pair.iter().any(|&e| e as usize >= self.num_edges()) {
                return Err(Error::UnknownEdge(format!("#{}", pair[0].max(pair[1]))));
            }
            if self.terminus(pair[0]) != self.origin(pair[1]) {
                return Err(Error::NotComposable(i, i + 1));
            }
        }
        if let Some(&e) = w.first() {
            if e as usize >= self.num_edges() {
                return Err(Error::UnknownEdge(format!("#{e}")));
            }
        }
        Ok(())
    }

    pub fn is_closed(&self, w: &[Edge]) -> bool {
        match (w.first(), w.last()) {
            (Some(&a), Some(&b)) => self.origin(a) == self.terminus(b),
            _ => true,
        }
    }
}

/// A combinatorial edge path; `start` matters only for the trivial path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgePath {
    pub start: Vertex,
    pub edges: Vec<Edge>,
}

impl EdgePath {
    pub fn trivial(v: Vertex) -> Self {
        EdgePath { start: v, edges: Vec::new() }
    }

    /// A non-trivial composable path.
    pub fn new(graph: &Graph, edges: Vec<Edge>) -> Result<Self> {
        let first = *edges.first().ok_or(Error::TrivialPath)?;
        graph.check_composable(&edges)?;
        Ok(EdgePath { start: graph.origin(first), edges })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self, graph: &Graph) -> Vertex {
        self.edges.last().map_or(self.start, |&e| graph.terminus(e))
    }

    pub fn is_reduced(&self) -> bool {
        is_reduced(&self.edges)
    }

    pub fn inverse(&self, graph: &Graph) -> EdgePath {
        EdgePath { start: self.end(graph), edges: inverse_word(&self.edges) }
    }
}

pub fn is_reduced(w: &[Edge]) -> bool {
    w.windows(2).all(|p| p[1] != inv(p[0]))
}

pub fn is_cyclically_reduced(w: &[Edge]) -> bool {
    is_reduced(w) && (w.len() < 2 || w[0] != inv(w[w.len() - 1]))
}

/// Free reduction by a cancellation stack.
pub fn reduce(w: &[Edge]) -> Vec<Edge> {
    let mut stack: Vec<Edge> = Vec::with_capacity(w.len());
    for &e in w {
        if stack.last() == Some(&inv(e)) {
            stack.pop();
        } else {
            stack.push(e);
        }
    }
    stack
}

/// [p]: the reduced path homotopic to `p` rel endpoints.
pub fn reduce_path(graph: &Graph, p: &EdgePath) -> Result<EdgePath> {
    graph.check_composable(&p.edges)?;
    if let Some(&e) = p.edges.first() {
        if graph.origin(e) != p.start {
            return Err(Error::NotComposable(0, 0));
        }
    }
    Ok(EdgePath { start: p.start, edges: reduce(&p.edges) })
}

/// Linear reduction followed by wrap-around cancellation. The result may be
/// empty for a contractible loop. Input is assumed composable.
pub fn cyclic_reduce_word(w: &[Edge]) -> Vec<Edge> {
    let r = reduce(w);
    let mut lo = 0;
    let mut hi = r.len();
    while hi - lo >= 2 && r[lo] == inv(r[hi - 1]) {
        lo += 1;
        hi -= 1;
    }
    r[lo..hi].to_vec()
}

/// A cyclically reduced loop, stored as one linear cut. May be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CyclicWord {
    edges: Vec<Edge>,
}

impl CyclicWord {
    /// Wraps an already cyclically reduced closed sequence.
    pub fn new(graph: &Graph, edges: Vec<Edge>) -> Result<Self> {
        graph.check_composable(&edges)?;
        if !graph.is_closed(&edges) {
            return Err(Error::NotClosed);
        }
        if !is_cyclically_reduced(&edges) {
            return Err(Error::Precondition("word is not cyclically reduced".into()));
        }
        Ok(CyclicWord { edges })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord { edges: inverse_word(&self.edges) }
    }

    /// The lexicographically least rotation, a canonical form for the
    /// conjugacy class with orientation.
    pub fn canonical(&self) -> CyclicWord {
        let k = least_rotation(&self.edges);
        let mut e = self.edges[k..].to_vec();
        e.extend_from_slice(&self.edges[..k]);
        CyclicWord { edges: e }
    }

    pub fn rotate(&self, k: usize) -> CyclicWord {
        if self.edges.is_empty() {
            return self.clone();
        }
        let k = k % self.edges.len();
        let mut e = self.edges[k..].to_vec();
        e.extend_from_slice(&self.edges[..k]);
        CyclicWord { edges: e }
    }

    /// Same loop up to rotation.
    pub fn is_conjugate(&self, other: &CyclicWord) -> bool {
        self.len() == other.len() && (self.is_empty() || self.canonical() == other.canonical())
    }

    pub fn display(&self, graph: &Graph) -> String {
        graph.format_word(&self.edges)
    }
}

/// Index of the lexicographically least rotation (two-pointer scan, O(n)).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = &s[(i + k) % n];
        let b = &s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Validates and cyclically reduces a closed composable sequence.
pub fn cyclically_reduce(graph: &Graph, w: &[Edge]) -> Result<CyclicWord> {
    graph.check_composable(w)?;
    if !graph.is_closed(w) {
        return Err(Error::NotClosed);
    }
    Ok(CyclicWord { edges: cyclic_reduce_word(w) })
}

/// Occurrence counts |host|_γ and |host|_γ̄.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Occurrences {
    pub forward: u64,
    pub backward: u64,
}

impl Occurrences {
    /// ⟨γ, host⟩ = |host|_γ + |host|_γ̄.
    pub fn total(&self) -> u64 {
        self.forward + self.backward
    }
}

fn count_linear(pattern: &[Edge], host: &[Edge]) -> u64 {
    if pattern.len() > host.len() {
        return 0;
    }
    host.windows(pattern.len()).filter(|w| *w == pattern).count() as u64
}

fn count_cyclic(pattern: &[Edge], host: &[Edge]) -> u64 {
    let n = host.len();
    if n == 0 {
        return 0;
    }
    (0..n)
        .filter(|&i| pattern.iter().enumerate().all(|(k, &e)| host[(i + k) % n] == e))
        .count() as u64
}

pub fn occurrences(gamma: &[Edge], host: &[Edge]) -> Result<Occurrences> {
    if gamma.is_empty() {
        return Err(Error::TrivialPath);
    }
    let bar = inverse_word(gamma);
    Ok(Occurrences { forward: count_linear(gamma, host), backward: count_linear(&bar, host) })
}

/// Cyclic occurrences: one test per starting position of the loop, reading
/// the infinite periodic word.
pub fn occurrences_cyclic(gamma: &[Edge], host: &CyclicWord) -> Result<Occurrences> {
    if gamma.is_empty() {
        return Err(Error::TrivialPath);
    }
    let bar = inverse_word(gamma);
    Ok(Occurrences { forward: count_cyclic(gamma, host.edges()), backward: count_cyclic(&bar, host.edges()) })
}

/// All reduced paths of length 1..=r, ordered by length then edge ids.
pub fn enumerate_reduced_paths(graph: &Graph, r: usize) -> Vec<Vec<Edge>> {
    let mut out: Vec<Vec<Edge>> = graph.edges().map(|e| vec![e]).collect();
    let mut frontier_start = 0;
    for _ in 1..r {
        let frontier_end = out.len();
        for i in frontier_start..frontier_end {
            let last = *out[i].last().unwrap();
            let t = graph.terminus(last);
            for e in graph.edges() {
                if graph.origin(e) == t && e != inv(last) {
                    let mut p = out[i].clone();
                    p.push(e);
                    out.push(p);
                }
            }
        }
        frontier_start = frontier_end;
    }
    out
}

/// Appends a shortest path that turns `path` into a cyclically reduced loop
/// (empty if it already is one). Breadth-first over (vertex, incoming edge).
pub fn close_up(graph: &Graph, path: &[Edge]) -> Result<CyclicWord> {
    let (&first, &last) = match (path.first(), path.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::TrivialPath),
    };
    let reduced = reduce(path);
    if reduced.len() != path.len() {
        return Err(Error::Precondition("path is not reduced".into()));
    }
    let start = graph.origin(first);
    if graph.terminus(last) == start && last != inv(first) {
        return Ok(CyclicWord { edges: path.to_vec() });
    }
    let m = graph.num_edges();
    let mut parent: Vec<Option<Edge>> = vec![None; m];
    let mut seen = vec![false; m];
    let mut queue = VecDeque::new();
    for e in graph.directions_at(graph.terminus(last)) {
        if e != inv(last) {
            seen[e as usize] = true;
            queue.push_back(e);
        }
    }
    while let Some(e) = queue.pop_front() {
        if graph.terminus(e) == start && e != inv(first) {
            let mut tail = vec![e];
            let mut cur = e;
            while let Some(p) = parent[cur as usize] {
                tail.push(p);
                cur = p;
            }
            tail.reverse();
            let mut edges = path.to_vec();
            edges.extend(tail);
            return Ok(CyclicWord { edges });
        }
        for d in graph.directions_at(graph.terminus(e)) {
            if d != inv(e) && !seen[d as usize] {
                seen[d as usize] = true;
                parent[d as usize] = Some(e);
                queue.push_back(d);
            }
        }
    }
    Err(Error::Precondition("no closing path exists".into()))
}

/// Uniform random reduced walk of `len` edges from vertex 0, closed up.
pub fn random_cyclic_word<R: Rng>(graph: &Graph, len: usize, rng: &mut R) -> CyclicWord {
    let len = len.max(1);
    loop {
        let mut w: Vec<Edge> = Vec::with_capacity(len);
        let mut v: Vertex = 0;
        for _ in 0..len {
            let choices: Vec<Edge> = graph
                .directions_at(v)
                .into_iter()
                .filter(|&e| w.last().is_none_or(|&l| e != inv(l)))
                .collect();
            if choices.is_empty() {
                break;
            }
            let e = choices[rng.gen_range(0..choices.len())];
            w.push(e);
            v = graph.terminus(e);
        }
        if graph.is_rose() {
            // Resample the last letter until the word is cyclically reduced.
            if w.len() >= 2 && w[0] == inv(w[w.len() - 1]) {
                continue;
            }
            return CyclicWord { edges: w };
        }
        if let Ok(c) = close_up(graph, &w) {
            return c;
        }
    }
}

/// Every canonical cyclically reduced word of length exactly `n`.
pub fn enumerate_cyclic_words(graph: &Graph, n: usize) -> Vec<CyclicWord> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for p in enumerate_reduced_paths_of_length(graph, n) {
        if graph.is_closed(&p) && is_cyclically_reduced(&p) && least_rotation(&p) == 0 {
            out.push(CyclicWord { edges: p });
        }
    }
    out
}

fn enumerate_reduced_paths_of_length(graph: &Graph, n: usize) -> Vec<Vec<Edge>> {
    let mut layer: Vec<Vec<Edge>> = graph.edges().map(|e| vec![e]).collect();
    for _ in 1..n {
        let mut next = Vec::with_capacity(layer.len() * 3);
        for p in &layer {
            let last = *p.last().unwrap();
            for e in graph.directions_at(graph.terminus(last)) {
                if e != inv(last) {
                    let mut q = p.clone();
                    q.push(e);
                    next.push(q);
                }
            }
        }
        layer = next;
    }
    layer
}

impl fmt::Display for Occurrences {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.forward, self.backward)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rose2() -> Graph {
        Graph::rose(&["a", "b"]).unwrap()
    }

    fn w(g: &Graph, s: &str) -> Vec<Edge> {
        g.parse_word(s).unwrap()
    }

    // Independent oracle: repeatedly delete the first adjacent cancelling pair.
    fn reduce_by_rescanning(mut v: Vec<Edge>) -> Vec<Edge> {
        loop {
            match (0..v.len().saturating_sub(1)).find(|&i| v[i + 1] == inv(v[i])) {
                Some(i) => {
                    v.drain(i..i + 2);
                }
                None => return v,
            }
        }
    }

    #[test]
    fn reduce_examples() {
        let g = rose2();
        assert_eq!(reduce(&w(&g, "aAb")), w(&g, "b"));
        assert_eq!(reduce(&w(&g, "ab")), w(&g, "ab"));
        assert!(reduce(&w(&g, "abBA")).is_empty());
        assert_eq!(reduce(&w(&g, "abBA")), reduce_by_rescanning(w(&g, "abBA")));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let g = Graph::rose(&["a", "b", "c"]).unwrap();
        assert_eq!(cyclically_reduce(&g, &w(&g, "Aba")).unwrap().edges(), &w(&g, "b")[..]);
        assert_eq!(cyclically_reduce(&g, &w(&g, "abAB")).unwrap().edges(), &w(&g, "abAB")[..]);
        assert_eq!(cyclically_reduce(&g, &w(&g, "abBAcc")).unwrap().edges(), &w(&g, "cc")[..]);
        assert!(cyclically_reduce(&g, &w(&g, "abBA")).unwrap().is_empty());
    }

    #[test]
    fn non_closed_and_non_composable_rejected() {
        let g = Graph::new(
            vec!["u".into(), "v".into()],
            vec![("a".into(), 0, 1), ("b".into(), 1, 0), ("c".into(), 0, 0)],
        )
        .unwrap();
        assert_eq!(cyclically_reduce(&g, &w(&g, "a")), Err(Error::NotClosed));
        assert!(matches!(g.check_composable(&w(&g, "aa")), Err(Error::NotComposable(0, 1))));
        assert!(reduce_path(&g, &EdgePath { start: 0, edges: w(&g, "ab") }).is_ok());
    }

    #[test]
    fn occurrence_examples() {
        let g = rose2();
        assert_eq!(occurrences(&w(&g, "a"), &w(&g, "aba")).unwrap().total(), 2);
        assert_eq!(occurrences(&w(&g, "aa"), &w(&g, "ab")).unwrap().total(), 0);
        let ab = CyclicWord::new(&g, w(&g, "ab")).unwrap();
        // The cyclic word ab reads ab and ba; b̄ā does not occur.
        let o = occurrences_cyclic(&w(&g, "ab"), &ab).unwrap();
        assert_eq!((o.forward, o.backward), (1, 0));
        assert!(occurrences(&[], &w(&g, "a")).is_err());
    }

    #[test]
    fn cyclic_count_reads_periodic_word() {
        let g = rose2();
        let a = CyclicWord::new(&g, w(&g, "a")).unwrap();
        assert_eq!(occurrences_cyclic(&w(&g, "aaa"), &a).unwrap().total(), 1);
        let ab2 = CyclicWord::new(&g, w(&g, "abab")).unwrap();
        assert_eq!(occurrences_cyclic(&w(&g, "aba"), &ab2).unwrap().total(), 2);
    }

    #[test]
    fn enumeration_counts() {
        let g1 = Graph::rose(&["a"]).unwrap();
        assert_eq!(enumerate_reduced_paths(&g1, 1), vec![vec![0], vec![1]]);
        assert_eq!(enumerate_reduced_paths(&rose2(), 2).len(), 16);
        assert_eq!(enumerate_reduced_paths(&rose2(), 1).len(), 4);
    }

    #[test]
    fn least_rotation_matches_naive() {
        let cases: Vec<Vec<u32>> = vec![vec![3, 1, 2, 1, 2], vec![1, 1, 1], vec![2, 1], vec![5], vec![0, 2, 0, 1, 0, 2, 0, 1]];
        for s in cases {
            let n = s.len();
            let naive = (0..n)
                .min_by_key(|&k| {
                    let mut r = s[k..].to_vec();
                    r.extend_from_slice(&s[..k]);
                    r
                })
                .unwrap();
            let k = least_rotation(&s);
            let rot = |k: usize| {
                let mut r = s[k..].to_vec();
                r.extend_from_slice(&s[..k]);
                r
            };
            assert_eq!(rot(k), rot(naive));
        }
    }

    #[test]
    fn parse_and_format() {
        let g = rose2();
        assert_eq!(g.format_word(&w(&g, "a B a")), "aBa");
        assert_eq!(g.parse_word("aBa").unwrap(), w(&g, "a B a"));
        assert_eq!(g.parse_word("c"), Err(Error::UnknownEdge("c".into())));
    }

    #[test]
    fn close_up_produces_loops() {
        let g = rose2();
        let c = close_up(&g, &w(&g, "abA")).unwrap();
        assert!(is_cyclically_reduced(c.edges()));
        assert_eq!(c.len(), 4);
        assert_eq!(close_up(&g, &w(&g, "ab")).unwrap().len(), 2);
    }
}
