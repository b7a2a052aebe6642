//! Geodesic currents as weight functions on reduced paths of bounded length:
//! counting currents, limit currents of edges, the simplex they span,
//! projective distances and limits of rational currents.

use std::collections::BTreeMap;
use std::sync::Arc;

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::graph::{enumerate_reduced_paths, inverse_word, CyclicWord, Edge, Graph};
use crate::map::GraphMap;
use crate::substitution::{ratio_f64, Substitution, DEFAULT_MAX_ITER};
use crate::tt::{rational_f64, InpSearch, TrainTrack};

pub const DEFAULT_RADIUS: usize = 3;
pub const DEFAULT_DEDUP_TOL: f64 = 1e-6;
pub const DEFAULT_LAMBDA_TOL: f64 = 1e-6;

/// All reduced paths of length 1..=R with dense lookup by letter code.
#[derive(Debug)]
pub struct PathIndex {
    graph: Graph,
    radius: usize,
    paths: Vec<Vec<Edge>>,
    flip: Vec<usize>,
    positive: Vec<usize>,
    base: usize,
    offset: Vec<usize>,
    table: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl PathIndex {
    pub fn new(graph: &Graph, radius: usize) -> Arc<PathIndex> {
        assert!(radius >= 1);
        let base = graph.num_edges();
        let mut offset = vec![0usize; radius + 2];
        for l in 1..=radius {
            offset[l + 1] = offset[l] + base.pow(l as u32);
        }
        let mut table = vec![NONE; offset[radius + 1]];
        let mut paths = Vec::new();
        for p in enumerate_reduced_paths(graph, radius) {
            let code = offset[p.len()] + p.iter().fold(0usize, |c, &e| c * base + e as usize);
            table[code] = paths.len() as u32;
            paths.push(p);
        }
        let mut idx = PathIndex { graph: graph.clone(), radius, paths, flip: Vec::new(), positive: Vec::new(), base, offset, table };
        idx.flip = idx.paths.iter().map(|p| idx.lookup(&inverse_word(p)).unwrap()).collect();
        idx.positive = graph.positive_edges().map(|e| idx.lookup(&[e]).unwrap()).collect();
        Arc::new(idx)
    }

    pub fn lookup(&self, p: &[Edge]) -> Option<usize> {
        if p.is_empty() || p.len() > self.radius {
            return None;
        }
        let code = self.offset[p.len()] + p.iter().fold(0usize, |c, &e| c * self.base + e as usize);
        match self.table.get(code) {
            Some(&i) if i != NONE => Some(i as usize),
            _ => None,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn paths(&self) -> &[Vec<Edge>] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// ⟨γ, μ⟩ for every reduced γ with |γ| ≤ R.
#[derive(Debug, Clone)]
pub struct WeightFunction {
    index: Arc<PathIndex>,
    pub values: Vec<f64>,
    /// Integer values when the function is a counting current.
    pub exact: Option<Vec<u64>>,
    /// Tolerance of approximate values, 0 for exact ones.
    pub tol: f64,
}

impl PartialEq for WeightFunction {
    fn eq(&self, other: &Self) -> bool {
        self.radius() == other.radius() && self.values == other.values && self.exact == other.exact
    }
}

impl Serialize for WeightFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let g = self.index.graph();
        let mut m = s.serialize_map(Some(self.values.len()))?;
        for (p, v) in self.index.paths().iter().zip(&self.values) {
            m.serialize_entry(&g.format_word(p), v)?;
        }
        m.end()
    }
}

impl WeightFunction {
    pub fn zero(index: &Arc<PathIndex>) -> WeightFunction {
        WeightFunction { index: index.clone(), values: vec![0.0; index.len()], exact: None, tol: 0.0 }
    }

    pub fn index(&self) -> &Arc<PathIndex> {
        &self.index
    }

    pub fn radius(&self) -> usize {
        self.index.radius()
    }

    pub fn get(&self, p: &[Edge]) -> f64 {
        self.index.lookup(p).map_or(0.0, |i| self.values[i])
    }

    /// ‖μ‖ = Σ over positive edges of ⟨e, μ⟩.
    pub fn norm(&self) -> f64 {
        self.index.positive.iter().map(|&i| self.values[i]).sum()
    }

    pub fn scaled(&self, c: f64) -> WeightFunction {
        WeightFunction { index: self.index.clone(), values: self.values.iter().map(|v| v * c).collect(), exact: None, tol: self.tol * c }
    }

    /// The representative of the projective class with norm 1.
    pub fn normalized(&self) -> Result<WeightFunction> {
        let n = self.norm();
        if n <= 0.0 {
            return Err(Error::Precondition("current has zero norm".into()));
        }
        Ok(self.scaled(1.0 / n))
    }

    /// Largest |⟨γ, μ⟩ − ⟨γ̄, μ⟩|.
    pub fn flip_defect(&self) -> f64 {
        self.index.flip.iter().enumerate().map(|(i, &j)| (self.values[i] - self.values[j]).abs()).fold(0.0, f64::max)
    }

    /// Largest violation of ⟨γ, μ⟩ = Σ_x ⟨γx, μ⟩ = Σ_x ⟨xγ, μ⟩ over
    /// reduced one-letter extensions, for |γ| < R.
    pub fn kolmogorov_defect(&self) -> f64 {
        let idx = &self.index;
        let g = idx.graph();
        let mut worst: f64 = 0.0;
        for (i, p) in idx.paths().iter().enumerate() {
            if p.len() >= idx.radius() {
                continue;
            }
            let last = *p.last().unwrap();
            let first = p[0];
            let mut right = 0.0;
            for x in g.directions_at(g.terminus(last)) {
                if x != crate::graph::inv(last) {
                    let mut q = p.clone();
                    q.push(x);
                    right += self.get(&q);
                }
            }
            let mut left = 0.0;
            for x in g.directions_at(g.origin(first)) {
                let y = crate::graph::inv(x);
                if y != crate::graph::inv(first) {
                    let mut q = vec![y];
                    q.extend_from_slice(p);
                    left += self.get(&q);
                }
            }
            worst = worst.max((self.values[i] - right).abs()).max((self.values[i] - left).abs());
        }
        worst
    }

    pub fn add_scaled(&mut self, other: &WeightFunction, c: f64) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
        self.exact = None;
        self.tol += c.abs() * other.tol;
    }
}

/// The counting current of a cyclic word: ⟨γ, η_w⟩ counts the cyclic
/// positions of w where γ or γ̄ starts, reading w periodically.
pub fn counting_current(index: &Arc<PathIndex>, w: &CyclicWord) -> Result<WeightFunction> {
    let e = w.edges();
    let n = e.len();
    if n == 0 {
        return Err(Error::EmptyLoop);
    }
    let r = index.radius();
    let mut counts = vec![0u64; index.len()];
    for i in 0..n {
        let mut code = 0usize;
        for l in 1..=r {
            code = code * index.base + e[(i + l - 1) % n] as usize;
            let k = index.table[index.offset[l] + code];
            debug_assert!(k != NONE);
            counts[k as usize] += 1;
        }
    }
    let exact: Vec<u64> = (0..counts.len()).map(|i| counts[i] + counts[index.flip[i]]).collect();
    Ok(WeightFunction { index: index.clone(), values: exact.iter().map(|&x| x as f64).collect(), exact: Some(exact), tol: 0.0 })
}

/// [f(w)], the word whose counting current is the push-forward of η_w.
pub fn pushforward_rational(f: &GraphMap, w: &CyclicWord) -> Result<CyclicWord> {
    let img = f.apply_cyclic(w);
    if img.is_empty() {
        return Err(Error::Precondition("image of the conjugacy class is trivial".into()));
    }
    Ok(img)
}

/// max_γ |⟨γ, μ⟩/‖μ‖ − ⟨γ, ν⟩/‖ν‖|.
pub fn projective_distance(mu: &WeightFunction, nu: &WeightFunction) -> Result<f64> {
    if mu.radius() != nu.radius() || mu.values.len() != nu.values.len() {
        return Err(Error::Precondition("currents on different path sets".into()));
    }
    let (a, b) = (mu.norm(), nu.norm());
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::Precondition("current has zero norm".into()));
    }
    Ok(mu.values.iter().zip(&nu.values).map(|(x, y)| (x / a - y / b).abs()).fold(0.0, f64::max))
}

/// A limit current μ₊(e) with its stretch factor.
#[derive(Debug, Clone, Serialize)]
pub struct LimitCurrent {
    pub edge: String,
    pub lambda: f64,
    pub current: WeightFunction,
    pub iterations: usize,
    pub power: usize,
}

impl TrainTrack {
    /// μ₊(e): symmetrized limit frequencies of the factors of fᵗ(e),
    /// normalized to norm 1.
    pub fn mu_plus(&self, index: &Arc<PathIndex>, e: Edge, tol: f64) -> Result<LimitCurrent> {
        let zeta = Substitution::from_map(self.map());
        let fr = zeta.limit_frequencies(e, index.radius(), tol, DEFAULT_MAX_ITER)?;
        let lambda = zeta.stretch_factor(e, tol, DEFAULT_MAX_ITER)?;
        let values: Vec<f64> = index.paths().iter().map(|p| fr.get(p) + fr.get(&inverse_word(p))).collect();
        let current = WeightFunction { index: index.clone(), values, exact: None, tol };
        Ok(LimitCurrent { edge: self.graph().edge_name(e), lambda, current, iterations: fr.iterations, power: fr.power })
    }

    /// Δ₊: the distinct projective classes among μ₊(e), e a positive edge.
    pub fn build_simplex(&self, radius: usize, tol: f64, dedup_tol: f64, lambda_tol: f64, mode: ExecMode) -> Result<LimitSimplex> {
        let index = PathIndex::new(self.graph(), radius);
        let edges: Vec<Edge> = self.graph().positive_edges().collect();
        let mus = mode.map(&edges, |&e| self.mu_plus(&index, e, tol));
        let mut vertices: Vec<SimplexVertex> = Vec::new();
        for (e, mu) in edges.iter().zip(mus) {
            let mu = mu?;
            let mut merged = false;
            for v in vertices.iter_mut() {
                if projective_distance(&v.current, &mu.current)? < dedup_tol {
                    if (v.lambda - mu.lambda).abs() > lambda_tol * v.lambda.max(1.0) {
                        return Err(Error::Precondition(format!(
                            "edges {} and {} share a limit current but stretch by {} and {}",
                            v.edges[0], mu.edge, v.lambda, mu.lambda
                        )));
                    }
                    v.edges.push(self.graph().edge_name(*e));
                    merged = true;
                    break;
                }
            }
            if !merged {
                vertices.push(SimplexVertex { current: mu.current, lambda: mu.lambda, edges: vec![mu.edge] });
            }
        }
        let uniform_faces = group_by_lambda(&vertices.iter().map(|v| v.lambda).collect::<Vec<_>>(), lambda_tol);
        Ok(LimitSimplex { dimension: vertices.len() - 1, vertices, uniform_faces, radius, tol, dedup_tol, lambda_tol, power: self.power() })
    }
}

/// Groups indices whose values agree within a relative tolerance.
pub fn group_by_lambda(lambdas: &[f64], rel_tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &l) in lambdas.iter().enumerate() {
        match groups.iter_mut().find(|g| (lambdas[g[0]] - l).abs() <= rel_tol * l.abs().max(1.0)) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
}

#[derive(Debug, Clone, Serialize)]
pub struct SimplexVertex {
    pub current: WeightFunction,
    pub lambda: f64,
    pub edges: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitSimplex {
    pub vertices: Vec<SimplexVertex>,
    pub uniform_faces: Vec<Vec<usize>>,
    pub dimension: usize,
    pub radius: usize,
    pub tol: f64,
    pub dedup_tol: f64,
    pub lambda_tol: f64,
    /// Power of the map whose stretch factors are reported.
    pub power: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexDistance {
    pub distance: f64,
    pub coefficients: Vec<f64>,
}

/// min over convex combinations v = Σ aᵢvᵢ of the normalized vertices of
/// the max-norm distance between μ/‖μ‖ and v, solved as a linear program.
pub fn distance_to_simplex(mu: &WeightFunction, simplex: &LimitSimplex) -> Result<SimplexDistance> {
    let k = simplex.vertices.len();
    if k == 0 {
        return Err(Error::Precondition("empty simplex".into()));
    }
    let target = mu.normalized()?;
    let verts: Vec<WeightFunction> = simplex.vertices.iter().map(|v| v.current.normalized()).collect::<Result<_>>()?;
    let coefficients = if k == 1 {
        vec![1.0]
    } else if k == 2 {
        let a = segment_argmin(&target.values, &verts[0].values, &verts[1].values);
        vec![a, 1.0 - a]
    } else {
        lp_coefficients(&target.values, &verts)?
    };
    let mut mix = WeightFunction::zero(mu.index());
    for (v, &c) in verts.iter().zip(&coefficients) {
        mix.add_scaled(v, c);
    }
    let distance = target.values.iter().zip(&mix.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(SimplexDistance { distance, coefficients })
}

fn lp_coefficients(target: &[f64], verts: &[WeightFunction]) -> Result<Vec<f64>> {
    let k = verts.len();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let t = lp.add_var(1.0, (0.0, f64::INFINITY));
    let a: Vec<_> = (0..k).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    lp.add_constraint(a.iter().map(|&x| (x, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
    for (p, &y) in target.iter().enumerate() {
        if verts.iter().all(|v| v.values[p] == 0.0) && y == 0.0 {
            continue;
        }
        // y − Σ aᵢ vᵢ ≤ t and Σ aᵢ vᵢ − y ≤ t.
        let mut lo: Vec<_> = a.iter().zip(verts).map(|(&x, v)| (x, v.values[p])).collect();
        lo.push((t, 1.0));
        lp.add_constraint(lo, ComparisonOp::Ge, y);
        let mut hi: Vec<_> = a.iter().zip(verts).map(|(&x, v)| (x, v.values[p])).collect();
        hi.push((t, -1.0));
        lp.add_constraint(hi, ComparisonOp::Le, y);
    }
    let sol = lp.solve().map_err(|e| Error::NoConvergence(format!("simplex projection: {e}")))?;
    let mut c: Vec<f64> = a.iter().map(|&x| sol[x].max(0.0)).collect();
    let s: f64 = c.iter().sum();
    c.iter_mut().for_each(|x| *x /= s);
    Ok(c)
}

/// argmin over a ∈ [0, 1] of max_p |y_p − a·u_p − (1 − a)·v_p|, a convex
/// piecewise linear function, by ternary search.
fn segment_argmin(y: &[f64], u: &[f64], v: &[f64]) -> f64 {
    let f = |a: f64| y.iter().zip(u).zip(v).map(|((y, u), v)| (y - a * u - (1.0 - a) * v).abs()).fold(0.0, f64::max);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    (lo + hi) / 2.0
}

/// A strongly connected component of the transition matrix.
#[derive(Debug, Clone, Serialize)]
pub struct Stratum {
    /// Positive edges.
    pub edges: Vec<Edge>,
    /// Perron-Frobenius eigenvalue of the diagonal block.
    pub lambda: f64,
    /// Strata met by images of this one, itself excluded.
    pub below: Vec<usize>,
}

fn pf_eigenvalue(m: &[Vec<u64>], idx: &[usize]) -> f64 {
    let k = idx.len();
    if idx.iter().all(|&i| idx.iter().all(|&j| m[i][j] == 0)) {
        return 0.0;
    }
    // Power iteration on B + I, primitive for irreducible B.
    let mut v = vec![1.0 / k as f64; k];
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let w: Vec<f64> = (0..k).map(|r| v[r] + (0..k).map(|c| m[idx[r]][idx[c]] as f64 * v[c]).sum::<f64>()).collect();
        let s: f64 = w.iter().sum();
        let next = s - 1.0;
        v = w.iter().map(|x| x / s).collect();
        if (next - lambda).abs() < 1e-14 * next.max(1.0) {
            return next;
        }
        lambda = next;
    }
    lambda
}

/// Strata of f: components of "f(e) crosses e′", with the reachability
/// order and per-stratum Perron-Frobenius eigenvalues.
pub fn strata(f: &GraphMap) -> Vec<Stratum> {
    let m = f.transition_matrix(false);
    let m = &m;
    let n = m.len();
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for y in 0..n {
        for x in 0..n {
            if m[x][y] > 0 {
                g.add_edge(nodes[y], nodes[x], ());
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&g).into_iter().map(|c| {
        let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
        v.sort();
        v
    }).collect();
    comps.sort();
    let comp_of: Vec<usize> = {
        let mut c = vec![0; n];
        for (i, comp) in comps.iter().enumerate() {
            for &e in comp {
                c[e] = i;
            }
        }
        c
    };
    comps
        .iter()
        .enumerate()
        .map(|(i, comp)| {
            let mut below: Vec<usize> = comp
                .iter()
                .flat_map(|&y| (0..n).filter(move |&x| m[x][y] > 0))
                .map(|x| comp_of[x])
                .filter(|&c| c != i)
                .collect();
            below.sort();
            below.dedup();
            Stratum { edges: comp.iter().map(|&e| 2 * e as Edge).collect(), lambda: pf_eigenvalue(m, comp), below }
        })
        .collect()
}

/// For each stratum: the largest eigenvalue reachable from it and the
/// greatest number of strata with that eigenvalue along a descending chain.
fn growth(st: &[Stratum], tol: f64) -> Vec<(f64, usize)> {
    fn go(i: usize, st: &[Stratum], memo: &mut Vec<Option<(f64, usize)>>, tol: f64) -> (f64, usize) {
        if let Some(x) = memo[i] {
            return x;
        }
        let mut best = (0.0f64, 0usize);
        for &j in &st[i].below {
            let c = go(j, st, memo, tol);
            if c.0 > best.0 + tol || ((c.0 - best.0).abs() <= tol && c.1 > best.1) {
                best = c;
            }
        }
        let own = st[i].lambda;
        let r = if own > best.0 + tol {
            (own, 1)
        } else if (own - best.0).abs() <= tol && own > 1.0 {
            (best.0, best.1 + 1)
        } else {
            best
        };
        memo[i] = Some(r);
        r
    }
    let mut memo = vec![None; st.len()];
    (0..st.len()).map(|i| go(i, st, &mut memo, tol)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitCurrent {
    pub current: WeightFunction,
    pub steps: usize,
    /// Steps carried out on words before the loop became legal.
    pub materialized: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrataLimit {
    pub current: WeightFunction,
    /// Steps of f until [fᵗ(w)] was pseudo-legal.
    pub steps: usize,
    /// Edges carrying the limit, with their weights.
    pub support: Vec<(String, f64)>,
    pub lambda: f64,
}

impl TrainTrack {
    /// [μ_∞] = [Σ κ_c μ₊(c)] over the legal edges c of a pseudo-legal
    /// iterate of w whose growth (eigenvalue, then chain length) is maximal,
    /// κ_c being the legal length of c times the limit share of |fᵗ(c)|.
    pub fn rational_limit_strata(
        &self,
        search: &InpSearch,
        w: &CyclicWord,
        radius: usize,
        tol: f64,
        max_steps: usize,
    ) -> Result<StrataLimit> {
        let mut x = w.clone();
        let mut steps = 0;
        let pseudo = loop {
            if let Some(p) = self.pseudo_legal_decomposition(x.edges(), true, &search.inps) {
                break p;
            }
            if steps == max_steps {
                return Err(Error::NoConvergence(format!("no pseudo-legal iterate within {max_steps} steps")));
            }
            x = pushforward_rational(self.map(), &x)?;
            steps += 1;
        };
        let mut weight: BTreeMap<Edge, f64> = BTreeMap::new();
        for (e, q) in self.legal_edge_weights(x.edges(), &pseudo) {
            *weight.entry(e & !1).or_default() += rational_f64(&q);
        }
        if weight.is_empty() {
            return Err(Error::Precondition("iterate is a concatenation of INPs".into()));
        }
        let st = strata(self.map());
        let gr = growth(&st, 1e-9);
        let stratum_of = |e: Edge| st.iter().position(|s| s.edges.contains(&e)).unwrap();
        let top = weight.keys().map(|&e| gr[stratum_of(e)]).fold((0.0f64, 0usize), |b, c| {
            if c.0 > b.0 + 1e-9 || ((c.0 - b.0).abs() <= 1e-9 && c.1 > b.1) { c } else { b }
        });
        let chosen: Vec<Edge> = weight
            .keys()
            .copied()
            .filter(|&e| {
                let c = gr[stratum_of(e)];
                (c.0 - top.0).abs() <= 1e-9 && c.1 == top.1
            })
            .collect();
        let share = self.length_shares(&chosen, tol)?;
        let index = PathIndex::new(self.graph(), radius);
        let mut mu = WeightFunction::zero(&index);
        let mut support = Vec::new();
        for (&e, s) in chosen.iter().zip(share) {
            let k = weight[&e] * s;
            let m = self.mu_plus(&index, e, tol)?;
            mu.add_scaled(&m.current, k);
            support.push((self.graph().edge_name(e), k));
        }
        Ok(StrataLimit { current: mu.normalized()?, steps, support, lambda: top.0 })
    }

    /// The normalized counting current of [fᵗ(w)] for the base map f. Words
    /// are iterated until the loop is legal; from then on f causes no
    /// cancellation and factor counts are carried on blocks.
    pub fn orbit_current(&self, index: &Arc<PathIndex>, w: &CyclicWord, t: usize, budget: usize) -> Result<OrbitCurrent> {
        let f = self.base();
        let mut x = w.clone();
        let mut done = 0;
        while done < t && !self.is_legal_loop(x.edges()) {
            x = pushforward_rational(f, &x)?;
            if x.len() > budget {
                return Err(Error::LengthBudget { len: x.len().to_string(), budget });
            }
            done += 1;
        }
        let materialized = done;
        let zeta = Substitution::from_map(f);
        let counts = zeta.cyclic_block_counts(x.edges(), index.radius(), t - done);
        let total: BigUint = counts.values().sum();
        let mut by_path = vec![BigUint::default(); index.len()];
        for (b, c) in &counts {
            for l in 1..=b.len() {
                if let Some(i) = index.lookup(&b[..l]) {
                    by_path[i] += c;
                }
            }
        }
        let mut current = WeightFunction::zero(index);
        for (i, p) in index.paths().iter().enumerate() {
            let j = index.lookup(&inverse_word(p)).expect("closed under inversion");
            current.values[i] = ratio_f64(&(&by_path[i] + &by_path[j]), &total);
        }
        Ok(OrbitCurrent { current, steps: t, materialized })
    }

    /// lim |fᵗ(c)| / Σ |fᵗ(c′)| over the given edges.
    fn length_shares(&self, edges: &[Edge], tol: f64) -> Result<Vec<f64>> {
        let zeta = Substitution::from_map(self.map());
        let mut l = vec![BigUint::from(1u32); zeta.alphabet_len()];
        let mut prev: Option<Vec<f64>> = None;
        for _ in 0..DEFAULT_MAX_ITER {
            l = zeta.images.iter().map(|img| img.iter().map(|&y| &l[y as usize]).sum()).collect();
            let total: BigUint = edges.iter().map(|&e| &l[e as usize]).sum();
            let cur: Vec<f64> = edges.iter().map(|&e| ratio_f64(&l[e as usize], &total)).collect();
            if let Some(p) = &prev {
                let big = total.to_f64().unwrap_or(f64::INFINITY);
                if p.iter().zip(&cur).all(|(a, b)| (a - b).abs() < tol) && big > 1.0 / tol {
                    return Ok(cur);
                }
            }
            prev = Some(cur);
        }
        Err(Error::NoConvergence("length shares did not settle".into()))
    }
}
