//! Periodic indivisible Nielsen paths and their preimages.
//!
//! Every INP or pre-INP sits at an illegal turn inside a pair of legal rays
//! of length ⌈C⌉ (at least one edge). The pair dynamics applies f to both
//! rays, strips the common prefix and truncates back to the window. A pair
//! either reaches a legal turn or enters a cycle; a cycle of length t carries
//! an fᵗ-fixed INP whose endpoints are found exactly on the piecewise linear
//! model in which f maps each edge affinely onto its image path.

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::TrainTrack;
use crate::error::{Error, Result};
use crate::graph::{inv, inverse_word, is_positive, Edge, Graph, Vertex};
use crate::map::{crossed_turn, GraphMap, Turn};

/// A legal branch leaving the tip: full edges `hull[..len-1]` then the
/// initial `end` fraction of the last hull edge, with 0 < end ≤ 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Branch {
    pub hull: Vec<Edge>,
    #[serde(serialize_with = "crate::tt::ser_rational")]
    pub end: BigRational,
}

impl Branch {
    /// The branch of `ray` ending at position y > 0.
    pub(crate) fn at(ray: &[Edge], y: &BigRational) -> Branch {
        let j = y.ceil().to_integer();
        let j: usize = j.try_into().expect("position within window");
        let end = y - BigRational::from_integer(BigInt::from(j - 1));
        Branch { hull: ray[..j].to_vec(), end }
    }

    /// Length in edges.
    pub fn length(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.hull.len() - 1)) + &self.end
    }

    pub fn ends_at_vertex(&self) -> bool {
        self.end.is_one()
    }

    /// The endpoint as a point of the graph.
    pub fn endpoint(&self, g: &Graph) -> Point {
        Point::on(g, *self.hull.last().unwrap(), &self.end)
    }
}

/// A point of the graph: a vertex or an interior point of a positive edge at
/// a fraction in (0, 1) from its origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Point {
    Vertex(Vertex),
    Interior {
        edge: Edge,
        #[serde(serialize_with = "crate::tt::ser_rational")]
        at: BigRational,
    },
}

impl Point {
    /// The point at fraction θ ∈ (0, 1] along oriented edge d.
    pub fn on(g: &Graph, d: Edge, theta: &BigRational) -> Point {
        if theta.is_one() {
            Point::Vertex(g.terminus(d))
        } else if theta.is_zero() {
            Point::Vertex(g.origin(d))
        } else if is_positive(d) {
            Point::Interior { edge: d, at: theta.clone() }
        } else {
            Point::Interior { edge: inv(d), at: BigRational::one() - theta }
        }
    }

    pub fn display(&self, g: &Graph) -> String {
        match self {
            Point::Vertex(v) => g.vertex_name(*v).to_string(),
            Point::Interior { edge, at } => format!("{}@{}", g.edge_name(*edge), super::rational_string(at)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NielsenKind {
    #[serde(rename = "INP")]
    Inp,
    #[serde(rename = "pre-INP")]
    PreInp,
}

/// η = (left branch)⁻¹ · (right branch), crossing exactly one illegal turn.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NielsenPath {
    pub left: Branch,
    pub right: Branch,
    pub kind: NielsenKind,
    /// t with [fᵗ(η)] = η, or that of the INP a pre-INP maps onto.
    pub period: usize,
    /// Steps until a pre-INP maps onto an INP (0 for INPs).
    pub pre_period: usize,
}

impl NielsenPath {
    pub fn tip(&self) -> Turn {
        Turn::new(self.left.hull[0], self.right.hull[0])
    }

    /// The combinatorial path spanned by η, partial end edges included.
    pub fn hull_path(&self) -> Vec<Edge> {
        let mut w = inverse_word(&self.left.hull);
        w.extend_from_slice(&self.right.hull);
        w
    }

    pub fn reversed(&self) -> NielsenPath {
        NielsenPath { left: self.right.clone(), right: self.left.clone(), ..self.clone() }
    }

    /// The orientation with the smaller (left, right) pair.
    pub fn canonical(&self) -> NielsenPath {
        let r = self.reversed();
        if (&r.left, &r.right) < (&self.left, &self.right) {
            r
        } else {
            self.clone()
        }
    }

    pub fn start_point(&self, g: &Graph) -> Point {
        self.left.endpoint(g)
    }

    pub fn end_point(&self, g: &Graph) -> Point {
        self.right.endpoint(g)
    }

    /// Direction of travel when leaving the start point.
    pub fn depart(&self) -> Edge {
        inv(*self.left.hull.last().unwrap())
    }

    /// Direction of travel when arriving at the end point.
    pub fn arrive(&self) -> Edge {
        *self.right.hull.last().unwrap()
    }

    pub fn display(&self, g: &Graph) -> String {
        format!(
            "{} | {} (from {} to {})",
            g.format_word(&inverse_word(&self.left.hull)),
            g.format_word(&self.right.hull),
            self.start_point(g).display(g),
            self.end_point(g).display(g)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Unresolved {
    pub left: Vec<Edge>,
    pub right: Vec<Edge>,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct InpSearch {
    pub inps: Vec<NielsenPath>,
    pub pre_inps: Vec<NielsenPath>,
    pub unresolved: Vec<Unresolved>,
    /// Ray length used for the pairs.
    pub window: usize,
    /// Number of initial ray pairs.
    pub pairs: usize,
    /// Number of distinct pair states visited.
    pub states: usize,
    /// Longest time for an initial pair to reach a legal turn or an INP.
    pub stabilization: usize,
    pub period_bound: usize,
}

/// Exact arithmetic on the piecewise linear model of fᵏ.
pub(crate) struct Pl<'a> {
    f: &'a GraphMap,
    lens: Vec<Vec<BigUint>>,
}

fn rat(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

impl<'a> Pl<'a> {
    pub(crate) fn new(f: &'a GraphMap) -> Self {
        Pl { f, lens: vec![vec![BigUint::one(); f.graph().num_edges()]] }
    }

    /// |fᵏ(e)|.
    pub(crate) fn len(&mut self, k: usize, e: Edge) -> BigUint {
        while self.lens.len() <= k {
            let prev = self.lens.last().unwrap();
            let next = self
                .f
                .graph()
                .edges()
                .map(|x| self.f.image(x).iter().fold(BigUint::zero(), |a, &y| a + &prev[y as usize]))
                .collect();
            self.lens.push(next);
        }
        self.lens[k][e as usize].clone()
    }

    pub(crate) fn word_len(&mut self, k: usize, w: &[Edge]) -> BigUint {
        w.iter().fold(BigUint::zero(), |a, &x| a + self.len(k, x))
    }

    /// Position in fᵏ(x) of the point at fraction θ ∈ [0, 1] of x.
    pub(crate) fn pos_in_image(&mut self, x: Edge, k: usize, theta: &BigRational) -> BigRational {
        let mut x = x;
        let mut theta = theta.clone();
        let mut acc = BigRational::zero();
        for r in (1..=k).rev() {
            if theta.is_zero() {
                return acc;
            }
            let img = self.f.image(x).to_vec();
            let m = BigRational::from_integer(BigInt::from(img.len()));
            let s = &theta * &m;
            let mut idx: usize = s.floor().to_integer().try_into().unwrap();
            if idx == img.len() {
                idx -= 1;
            }
            theta = s - BigRational::from_integer(BigInt::from(idx));
            acc += rat(&self.word_len(r - 1, &img[..idx]));
            x = img[idx];
        }
        acc + theta
    }

    /// Position of fᵏ(y) along fᵏ(word), minus `shift`.
    pub(crate) fn map_position(&mut self, word: &[Edge], k: usize, shift: &BigUint, y: &BigRational) -> BigRational {
        let mut j: usize = y.floor().to_integer().try_into().unwrap();
        if j == word.len() {
            j -= 1;
        }
        let theta = y - BigRational::from_integer(BigInt::from(j));
        rat(&self.word_len(k, &word[..j])) + self.pos_in_image(word[j], k, &theta) - rat(shift)
    }

    /// Solves F(y) = y (when `target` is None) or F(y) = target for
    /// y ∈ (0, |word|], where F(y) is the position of fᵏ(y) along fᵏ(word)
    /// minus `shift`. F increases with slope at least 2ᵏ on every cell.
    pub(crate) fn solve(
        &mut self,
        word: &[Edge],
        k: usize,
        shift: &BigUint,
        target: Option<&BigRational>,
    ) -> Option<BigRational> {
        let shift = rat(shift);
        let a = if target.is_none() { BigRational::one() } else { BigRational::zero() };
        let b = target.cloned().unwrap_or_else(BigRational::zero);
        let h = |fy: &BigRational, y: &BigRational| fy - &shift - &a * y - &b;
        if h(&BigRational::zero(), &BigRational::zero()) >= BigRational::zero() {
            return None;
        }
        let mut prefix = BigRational::zero();
        let mut found = None;
        for (j, &x) in word.iter().enumerate() {
            let next = &prefix + rat(&self.len(k, x));
            let y = BigRational::from_integer(BigInt::from(j + 1));
            let v = h(&next, &y);
            if v.is_zero() {
                return Some(y);
            }
            if v > BigRational::zero() {
                found = Some((j, prefix));
                break;
            }
            prefix = next;
        }
        let (j, f0) = found?;
        // Descend through the cells of the piecewise linear map.
        let mut y0 = BigRational::from_integer(BigInt::from(j));
        let mut w = BigRational::one();
        let mut f0 = f0;
        let mut x = word[j];
        for r in (1..=k).rev() {
            let img = self.f.image(x).to_vec();
            let m = BigRational::from_integer(BigInt::from(img.len()));
            let mut fs = f0.clone();
            let mut chosen = None;
            for (i, &z) in img.iter().enumerate() {
                let fe = &fs + rat(&self.len(r - 1, z));
                let ye = &y0 + &w * BigRational::from_integer(BigInt::from(i + 1)) / &m;
                let v = h(&fe, &ye);
                if v.is_zero() {
                    return Some(ye);
                }
                if v > BigRational::zero() {
                    chosen = Some((i, z, fs.clone()));
                    break;
                }
                fs = fe;
            }
            let (i, z, fstart) = chosen.expect("sign change inside cell");
            y0 = &y0 + &w * BigRational::from_integer(BigInt::from(i)) / &m;
            w = &w / &m;
            f0 = fstart;
            x = z;
        }
        // On the final cell F(y) = f0 + (y − y0)/w.
        let inv_w = BigRational::one() / &w;
        let y = (&shift + &b - &f0 + &y0 * &inv_w) / (&inv_w - &a);
        Some(y)
    }
}

struct PairState {
    r1: Vec<Edge>,
    r2: Vec<Edge>,
    tau: Vec<Edge>,
    next: Option<usize>,
}

#[derive(Clone)]
enum Status {
    Pending,
    Resolved(usize),
    Eta(BigRational, BigRational),
    Failed(String),
}

impl TrainTrack {
    /// Legal paths of `len` edges starting with direction d.
    pub(crate) fn legal_paths_from(&self, d: Edge, len: usize) -> Vec<Vec<Edge>> {
        let mut layer = vec![vec![d]];
        for _ in 1..len {
            let mut next = Vec::new();
            for p in &layer {
                for &h in self.continuations(*p.last().unwrap()) {
                    let mut q = p.clone();
                    q.push(h);
                    next.push(q);
                }
            }
            layer = next;
        }
        layer
    }

    /// One step of the pair dynamics: (common prefix, next rays) or None
    /// when the new turn is legal.
    fn pair_step(&self, r1: &[Edge], r2: &[Edge], window: usize) -> (Vec<Edge>, Option<(Vec<Edge>, Vec<Edge>)>) {
        let i1 = self.map().apply(r1);
        let i2 = self.map().apply(r2);
        let p = i1.iter().zip(&i2).take_while(|(x, y)| x == y).count();
        let tau = i1[..p].to_vec();
        let s1 = &i1[p..(p + window).min(i1.len())];
        let s2 = &i2[p..(p + window).min(i2.len())];
        if s1.is_empty() || s2.is_empty() || self.is_legal_junction(inv(s1[0]), s2[0]) {
            return (tau, None);
        }
        (tau, Some((s1.to_vec(), s2.to_vec())))
    }

    /// Default bound on INP periods: 2·|EΓ|².
    pub fn default_period_bound(&self) -> usize {
        let e = self.graph().num_edges();
        2 * e * e
    }

    pub fn find_inps(&self) -> InpSearch {
        self.find_inps_with(self.default_period_bound())
    }

    pub fn find_inps_with(&self, period_bound: usize) -> InpSearch {
        let window = self.cutoff().max(1);
        let mut index: HashMap<(Vec<Edge>, Vec<Edge>), usize> = HashMap::new();
        let mut states: Vec<PairState> = Vec::new();
        let mut initial = Vec::new();
        let mut paths: HashMap<Edge, Vec<Vec<Edge>>> = HashMap::new();
        for t in &self.turns().illegal_turns {
            for d in [t.0, t.1] {
                paths.entry(d).or_insert_with(|| self.legal_paths_from(d, window));
            }
            for p in &paths[&t.0] {
                for q in &paths[&t.1] {
                    let key = (p.clone(), q.clone());
                    let id = *index.entry(key).or_insert_with(|| {
                        states.push(PairState { r1: p.clone(), r2: q.clone(), tau: vec![], next: None });
                        states.len() - 1
                    });
                    initial.push(id);
                }
            }
        }
        // Explore every reachable state.
        let mut k = 0;
        while k < states.len() {
            let (tau, next) = self.pair_step(&states[k].r1, &states[k].r2, window);
            states[k].tau = tau;
            if let Some(key) = next {
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        states.push(PairState { r1: key.0.clone(), r2: key.1.clone(), tau: vec![], next: None });
                        index.insert(key, states.len() - 1);
                        states.len() - 1
                    }
                };
                states[k].next = Some(id);
            }
            k += 1;
        }
        let n = states.len();
        let mut pl = Pl::new(self.map());
        let mut status = vec![Status::Pending; n];
        let mut in_cycle = vec![false; n];
        let mut periods = vec![0usize; n];
        // Cycles of the functional graph.
        let mut color = vec![0u8; n];
        for s in 0..n {
            let mut path = Vec::new();
            let mut u = Some(s);
            while let Some(x) = u {
                if color[x] != 0 {
                    break;
                }
                color[x] = 1;
                path.push(x);
                u = states[x].next;
            }
            if let Some(x) = u {
                if color[x] == 1 {
                    let at = path.iter().position(|&y| y == x).unwrap();
                    let cycle: Vec<usize> = path[at..].to_vec();
                    for (i, &c) in cycle.iter().enumerate() {
                        in_cycle[c] = true;
                        let (st, per) = self.cycle_inp(&states, &cycle, i, period_bound, &mut pl);
                        status[c] = st;
                        periods[c] = per;
                    }
                }
            }
            for &y in &path {
                color[y] = 2;
            }
        }
        // Pull positions back along every trajectory.
        for s in 0..n {
            if !matches!(status[s], Status::Pending) {
                continue;
            }
            let mut path = Vec::new();
            let mut u = s;
            loop {
                if !matches!(status[u], Status::Pending) {
                    break;
                }
                match states[u].next {
                    None => {
                        status[u] = Status::Resolved(1);
                        break;
                    }
                    Some(v) => {
                        path.push(u);
                        u = v;
                    }
                }
            }
            for &x in path.iter().rev() {
                let v = states[x].next.unwrap();
                status[x] = match &status[v] {
                    Status::Resolved(k) => Status::Resolved(k + 1),
                    Status::Failed(r) => Status::Failed(r.clone()),
                    Status::Eta(z1, z2) => {
                        let shift = BigUint::from(states[x].tau.len());
                        let y1 = pl.solve(&states[x].r1, 1, &shift, Some(z1));
                        let y2 = pl.solve(&states[x].r2, 1, &shift, Some(z2));
                        match (y1, y2) {
                            (Some(y1), Some(y2)) if y1 > BigRational::zero() && y2 > BigRational::zero() => {
                                Status::Eta(y1, y2)
                            }
                            _ => Status::Failed("preimage leaves the window".into()),
                        }
                    }
                    Status::Pending => unreachable!(),
                };
                periods[x] = periods[v];
            }
        }
        let eta_of = |s: usize| -> Option<NielsenPath> {
            match &status[s] {
                Status::Eta(y1, y2) => Some(NielsenPath {
                    left: Branch::at(&states[s].r1, y1),
                    right: Branch::at(&states[s].r2, y2),
                    kind: NielsenKind::Inp,
                    period: periods[s],
                    pre_period: 0,
                }),
                _ => None,
            }
        };
        let mut inp_set: BTreeSet<NielsenPath> = BTreeSet::new();
        for s in 0..n {
            if in_cycle[s] {
                if let Some(e) = eta_of(s) {
                    inp_set.insert(e.canonical());
                }
            }
        }
        let inp_keys: BTreeSet<(Branch, Branch)> =
            inp_set.iter().flat_map(|e| [(e.left.clone(), e.right.clone()), (e.right.clone(), e.left.clone())]).collect();
        let is_inp = |e: &NielsenPath| inp_keys.contains(&(e.left.clone(), e.right.clone()));
        // Steps until the carried path is an INP.
        let mut pre = vec![usize::MAX; n];
        let mut pre_inps: BTreeSet<NielsenPath> = BTreeSet::new();
        let mut unresolved = Vec::new();
        for s in 0..n {
            let mut path = Vec::new();
            let mut u = Some(s);
            while let Some(x) = u {
                if pre[x] != usize::MAX {
                    break;
                }
                match eta_of(x) {
                    Some(e) if is_inp(&e) => {
                        pre[x] = 0;
                        break;
                    }
                    Some(_) => {
                        path.push(x);
                        u = states[x].next;
                    }
                    None => break,
                }
            }
            let mut base = u.map(|x| pre[x]).unwrap_or(usize::MAX);
            for &x in path.iter().rev() {
                if base == usize::MAX {
                    break;
                }
                base += 1;
                pre[x] = base;
                let mut e = eta_of(x).unwrap();
                e.kind = NielsenKind::PreInp;
                e.pre_period = base;
                pre_inps.insert(e.canonical());
            }
            if let Status::Failed(r) = &status[s] {
                if initial.contains(&s) || in_cycle[s] {
                    unresolved.push(Unresolved { left: states[s].r1.clone(), right: states[s].r2.clone(), reason: r.clone() });
                }
            }
        }
        // A pre-INP with several pre-periods keeps the least.
        let mut best: HashMap<(Branch, Branch), NielsenPath> = HashMap::new();
        for e in pre_inps {
            let key = (e.left.clone(), e.right.clone());
            match best.get(&key) {
                Some(o) if o.pre_period <= e.pre_period => {}
                _ => {
                    best.insert(key, e);
                }
            }
        }
        let mut pre_inps: Vec<NielsenPath> = best.into_values().collect();
        pre_inps.sort();
        let stabilization = initial
            .iter()
            .map(|&s| match &status[s] {
                Status::Resolved(k) => *k,
                Status::Eta(..) if pre[s] != usize::MAX => pre[s],
                _ => 0,
            })
            .max()
            .unwrap_or(0)
            .max(1);
        unresolved.sort_by(|a, b| (&a.left, &a.right).cmp(&(&b.left, &b.right)));
        unresolved.dedup();
        InpSearch {
            inps: inp_set.into_iter().collect(),
            pre_inps,
            unresolved,
            window,
            pairs: initial.len(),
            states: n,
            stabilization,
            period_bound,
        }
    }

    /// The fixed INP carried by cycle state `cycle[i]`, with its least period.
    fn cycle_inp(
        &self,
        states: &[PairState],
        cycle: &[usize],
        i: usize,
        period_bound: usize,
        pl: &mut Pl,
    ) -> (Status, usize) {
        let t = cycle.len();
        if t > period_bound {
            return (Status::Failed(format!("cycle length {t} exceeds period bound {period_bound}")), 0);
        }
        let base = &states[cycle[i]];
        let shift_after = |d: usize, pl: &mut Pl| -> BigUint {
            (0..d).fold(BigUint::zero(), |acc, k| {
                let s = &states[cycle[(i + k) % t]];
                acc + pl.word_len(d - 1 - k, &s.tau)
            })
        };
        let shift = shift_after(t, pl);
        let y1 = pl.solve(&base.r1, t, &shift, None);
        let y2 = pl.solve(&base.r2, t, &shift, None);
        let (y1, y2) = match (y1, y2) {
            (Some(a), Some(b)) => (a, b),
            _ => return (Status::Failed("fixed point outside the window".into()), 0),
        };
        let b1 = Branch::at(&base.r1, &y1);
        let b2 = Branch::at(&base.r2, &y2);
        for d in 1..t {
            if t % d != 0 {
                continue;
            }
            let sd = shift_after(d, pl);
            let target = &states[cycle[(i + d) % t]];
            let z1 = pl.map_position(&base.r1, d, &sd, &y1);
            let z2 = pl.map_position(&base.r2, d, &sd, &y2);
            if z1 > BigRational::zero()
                && z2 > BigRational::zero()
                && z1.ceil().to_integer() <= BigInt::from(target.r1.len())
                && z2.ceil().to_integer() <= BigInt::from(target.r2.len())
                && Branch::at(&target.r1, &z1) == b1
                && Branch::at(&target.r2, &z2) == b2
            {
                return (Status::Eta(y1, y2), d);
            }
        }
        (Status::Eta(y1, y2), t)
    }

    /// The branches of [fᵗ(η)], computed by materializing fᵗ on the hull of
    /// η, cancelling at the tip and locating the images of the endpoints.
    /// None when the endpoints are absorbed by the cancellation.
    pub fn nielsen_image(&self, eta: &NielsenPath, t: usize, budget: usize) -> Result<Option<(Branch, Branch)>> {
        let mut pl = Pl::new(self.map());
        let total = pl.word_len(t, &eta.left.hull) + pl.word_len(t, &eta.right.hull);
        if total > BigUint::from(budget) {
            return Err(Error::LengthBudget { len: total.to_string(), budget });
        }
        let mut w1 = eta.left.hull.clone();
        let mut w2 = eta.right.hull.clone();
        for _ in 0..t {
            w1 = self.map().apply(&w1);
            w2 = self.map().apply(&w2);
        }
        let p = w1.iter().zip(&w2).take_while(|(x, y)| x == y).count();
        let pb = BigUint::from(p);
        let mut image = |b: &Branch, w: &[Edge]| -> Option<Branch> {
            let z = pl.map_position(&b.hull, t, &pb, &b.length());
            (z > BigRational::zero()).then(|| Branch::at(&w[p..], &z))
        };
        Ok(image(&eta.left, &w1).zip(image(&eta.right, &w2)))
    }

    /// Checks [fᵗ(η)] = η.
    pub fn verify_nielsen(&self, eta: &NielsenPath, t: usize, budget: usize) -> Result<bool> {
        Ok(self.nielsen_image(eta, t, budget)? == Some((eta.left.clone(), eta.right.clone())))
    }

    /// Whether η crosses exactly one illegal turn, at its tip.
    pub fn is_single_tip(&self, eta: &NielsenPath) -> bool {
        let w = eta.hull_path();
        let tip = eta.left.hull.len();
        self.illegal_junctions(&w, false) == vec![tip]
            && !self.is_legal_turn(crossed_turn(inv(eta.left.hull[0]), eta.right.hull[0]))
    }
}
