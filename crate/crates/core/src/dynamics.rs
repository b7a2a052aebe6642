//! North-South experiments: orbits of rational currents under a train track
//! representative of φ and one of φ⁻¹, goodness trajectories and the
//! empirical convergence criterion.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::currents::{counting_current, distance_to_simplex, strata, LimitSimplex, PathIndex, WeightFunction};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::graph::{close_up, cyclic_reduce_word, inv, random_cyclic_word, CyclicWord, Edge, Graph, Vertex};
use crate::map::GraphMap;
use crate::tt::{InpSearch, TrainTrack};

/// Default word-length budget for orbits.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// A map Γ → Γ′ sending vertices to vertices, given on positive edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub source: Graph,
    pub target: Graph,
    images: Vec<Vec<Edge>>,
}

impl Translation {
    pub fn identity(g: &Graph) -> Translation {
        Translation { source: g.clone(), target: g.clone(), images: g.edges().map(|e| vec![e]).collect() }
    }

    pub fn new(source: Graph, target: Graph, positive_images: Vec<Vec<Edge>>) -> Result<Translation> {
        if positive_images.len() * 2 != source.num_edges() {
            return Err(Error::Precondition("one image per positive edge".into()));
        }
        let mut images = Vec::with_capacity(source.num_edges());
        for img in positive_images {
            target.check_composable(&img)?;
            if img.is_empty() {
                return Err(Error::TrivialPath);
            }
            images.push(img.clone());
            images.push(img.iter().rev().map(|&x| inv(x)).collect());
        }
        let mut vimg: Vec<Option<Vertex>> = vec![None; source.num_vertices()];
        for e in source.edges() {
            let w = target.origin(images[e as usize][0]);
            let slot = &mut vimg[source.origin(e) as usize];
            if slot.is_some_and(|x| x != w) {
                return Err(Error::Precondition(format!(
                    "images at vertex {} start at different vertices",
                    source.vertex_name(source.origin(e))
                )));
            }
            *slot = Some(w);
        }
        Ok(Translation { source, target, images })
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.images.iter().enumerate().all(|(e, img)| img[..] == [e as Edge])
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn apply_cyclic(&self, w: &CyclicWord) -> Result<CyclicWord> {
        if self.is_identity() {
            return Ok(w.clone());
        }
        let img: Vec<Edge> = w.edges().iter().flat_map(|&e| self.images[e as usize].iter().copied()).collect();
        CyclicWord::new(&self.target, cyclic_reduce_word(&img))
    }
}

/// A basis of loops: fundamental cycles of a breadth-first spanning tree.
pub fn basis_loops(g: &Graph) -> Vec<CyclicWord> {
    let n = g.num_vertices();
    let mut parent: Vec<Option<Edge>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0 as Vertex]);
    let mut tree = vec![false; g.num_edges()];
    while let Some(v) = queue.pop_front() {
        for e in g.directions_at(v) {
            let t = g.terminus(e) as usize;
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some(e);
                tree[e as usize] = true;
                tree[inv(e) as usize] = true;
                queue.push_back(t as Vertex);
            }
        }
    }
    let to_root = |mut v: Vertex| {
        let mut p = Vec::new();
        while let Some(e) = parent[v as usize] {
            p.push(inv(e));
            v = g.origin(e);
        }
        p
    };
    g.positive_edges()
        .filter(|&e| !tree[e as usize])
        .map(|e| {
            let mut w: Vec<Edge> = to_root(g.origin(e)).iter().rev().map(|&x| inv(x)).collect();
            w.push(e);
            w.extend(to_root(g.terminus(e)));
            CyclicWord::new(g, cyclic_reduce_word(&w)).expect("fundamental cycle")
        })
        .collect()
}

/// Train track representatives f of φ on Γ and f′ of φ⁻¹ on Γ′ with
/// translations h: Γ → Γ′ and h′: Γ′ → Γ.
#[derive(Debug, Clone)]
pub struct AutomorphismPair {
    pub forward: TrainTrack,
    pub backward: TrainTrack,
    pub h: Translation,
    pub h_back: Translation,
    /// B with |γ|/B ≤ |h(γ)| ≤ B|γ|.
    pub lipschitz_b: f64,
}

impl AutomorphismPair {
    /// Checks on a basis of loops that h′h is the identity on conjugacy
    /// classes and that h′f′hf is too.
    pub fn new(forward: TrainTrack, backward: TrainTrack, h: Translation, h_back: Translation) -> Result<AutomorphismPair> {
        if h.source != *forward.graph() || h.target != *backward.graph() || h_back.source != h.target || h_back.target != h.source {
            return Err(Error::Precondition("translations do not match the graphs".into()));
        }
        for g in basis_loops(forward.graph()) {
            let round = h_back.apply_cyclic(&h.apply_cyclic(&g)?)?;
            if !round.is_conjugate(&g) {
                return Err(Error::Precondition(format!("h′h moves the loop {}", g.display(forward.graph()))));
            }
            let there = h.apply_cyclic(&forward.base().apply_cyclic(&g))?;
            let back = h_back.apply_cyclic(&backward.base().apply_cyclic(&there))?;
            if !back.is_conjugate(&g) {
                return Err(Error::Precondition(format!(
                    "the maps are not inverse on the loop {}",
                    g.display(forward.graph())
                )));
            }
        }
        let lipschitz_b = h.max_image_len().max(h_back.max_image_len()) as f64;
        Ok(AutomorphismPair { forward, backward, h, h_back, lipschitz_b })
    }

    /// Both directions on one rose with identity translations.
    pub fn on_rose(forward: TrainTrack, backward: TrainTrack) -> Result<AutomorphismPair> {
        let h = Translation::identity(forward.graph());
        AutomorphismPair::new(forward, backward, h.clone(), Translation { source: h.target.clone(), target: h.source.clone(), images: h.images })
    }

    /// The pair for φ⁻¹.
    pub fn swapped(&self) -> AutomorphismPair {
        AutomorphismPair {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
            h: self.h_back.clone(),
            h_back: self.h.clone(),
            lipschitz_b: self.lipschitz_b,
        }
    }
}

/// Simplices and path indices for distance measurements on both sides.
#[derive(Debug, Clone)]
pub struct NsContext {
    pub pair: AutomorphismPair,
    pub delta_plus: LimitSimplex,
    pub delta_minus: LimitSimplex,
    pub index_fwd: Arc<PathIndex>,
    pub index_bwd: Arc<PathIndex>,
    pub budget: usize,
}

impl NsContext {
    pub fn new(pair: AutomorphismPair, radius: usize, tol: f64, dedup_tol: f64, lambda_tol: f64, budget: usize, mode: ExecMode) -> Result<NsContext> {
        let delta_plus = pair.forward.build_simplex(radius, tol, dedup_tol, lambda_tol, mode)?;
        let delta_minus = pair.backward.build_simplex(radius, tol, dedup_tol, lambda_tol, mode)?;
        let index_fwd = delta_plus.vertices[0].current.index().clone();
        let index_bwd = delta_minus.vertices[0].current.index().clone();
        Ok(NsContext { pair, delta_plus, delta_minus, index_fwd, index_bwd, budget })
    }

    pub fn swapped(&self) -> NsContext {
        NsContext {
            pair: self.pair.swapped(),
            delta_plus: self.delta_minus.clone(),
            delta_minus: self.delta_plus.clone(),
            index_fwd: self.index_bwd.clone(),
            index_bwd: self.index_fwd.clone(),
            budget: self.budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRecord {
    /// n for [φⁿ(w)], negative for the backward orbit.
    pub step: i64,
    pub len: usize,
    /// Goodness in Γ and in Γ′.
    pub goodness: f64,
    pub goodness_back: f64,
    /// Illegal turns in the graph the word is iterated in.
    pub ilt: usize,
    pub dist_plus: f64,
    pub dist_minus: f64,
    /// Convex coefficients of the nearest point of Δ₊.
    pub coeff_plus: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orbit {
    pub records: Vec<OrbitRecord>,
    /// Set when the word budget stopped an orbit before n_max, per direction.
    pub truncated_forward: Option<i64>,
    pub truncated_backward: Option<i64>,
}

impl Orbit {
    pub fn forward(&self) -> impl Iterator<Item = &OrbitRecord> {
        self.records.iter().filter(|r| r.step >= 0)
    }

    pub fn backward(&self) -> impl Iterator<Item = &OrbitRecord> {
        self.records.iter().filter(|r| r.step <= 0)
    }
}

fn dist(mu: &WeightFunction, s: &LimitSimplex) -> Result<f64> {
    Ok(distance_to_simplex(mu, s)?.distance)
}

/// Words through each INP and pre-INP and words confined to single strata.
pub fn adversarial_words(tt: &TrainTrack, search: &InpSearch, len: usize, seed: u64) -> Vec<CyclicWord> {
    let g = tt.graph();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let walk = |start: Vec<Edge>, allowed: &dyn Fn(Edge) -> bool, rng: &mut ChaCha8Rng| -> Option<CyclicWord> {
        let mut w = start;
        while w.len() < len.max(1) {
            let v = w.last().map_or(0, |&l| g.terminus(l));
            let choices: Vec<Edge> =
                g.directions_at(v).into_iter().filter(|&e| allowed(e) && w.last().is_none_or(|&l| e != inv(l))).collect();
            if choices.is_empty() {
                return None;
            }
            w.push(choices[rng.gen_range(0..choices.len())]);
        }
        close_up(g, &w).ok().filter(|c| c.edges().iter().all(|&e| allowed(e)))
    };
    for eta in search.inps.iter().chain(&search.pre_inps) {
        if let Some(w) = walk(eta.hull_path(), &|_| true, &mut rng) {
            out.push(w);
        }
    }
    for st in strata(tt.map()) {
        if st.lambda <= 1.0 {
            continue;
        }
        let allowed = |e: Edge| st.edges.contains(&(e & !1));
        let first = st.edges[0];
        if let Some(w) = walk(vec![first], &allowed, &mut rng) {
            out.push(w);
        }
    }
    out
}

impl NsContext {
    /// Record of a word x in Γ (forward side) or Γ′ (backward side).
    fn record(&self, step: i64, x: &CyclicWord, backward: bool) -> Result<OrbitRecord> {
        let p = &self.pair;
        let (here, there) = if backward {
            (p.h_back.apply_cyclic(x)?, x.clone())
        } else {
            (x.clone(), p.h.apply_cyclic(x)?)
        };
        let gf = p.forward.goodness(&here)?;
        let gb = p.backward.goodness(&there)?;
        let plus = distance_to_simplex(&counting_current(&self.index_fwd, &here)?, &self.delta_plus)?;
        Ok(OrbitRecord {
            step,
            len: x.len(),
            goodness: gf.goodness_f64(),
            goodness_back: gb.goodness_f64(),
            ilt: if backward { gb.ilt } else { gf.ilt },
            dist_plus: plus.distance,
            dist_minus: dist(&counting_current(&self.index_bwd, &there)?, &self.delta_minus)?,
            coeff_plus: plus.coefficients,
        })
    }

    /// [φⁿ(w)] for 0 ≤ n ≤ n_max through f and [φ⁻ⁿ(w)] through f′ on h(w),
    /// stopping a direction once its word exceeds the budget.
    pub fn orbit(&self, w: &CyclicWord, n_max: usize) -> Result<Orbit> {
        let mut records = vec![self.record(0, w, false)?];
        let mut truncated_forward = None;
        let mut truncated_backward = None;
        let mut x = w.clone();
        for n in 1..=n_max {
            let next = self.pair.forward.base().apply_cyclic(&x);
            if next.len() > self.budget {
                truncated_forward = Some(n as i64);
                break;
            }
            x = next;
            records.push(self.record(n as i64, &x, false)?);
        }
        let mut y = self.pair.h.apply_cyclic(w)?;
        for n in 1..=n_max {
            let next = self.pair.backward.base().apply_cyclic(&y);
            if next.len() > self.budget {
                truncated_backward = Some(-(n as i64));
                break;
            }
            y = next;
            records.push(self.record(-(n as i64), &y, true)?);
        }
        Ok(Orbit { records, truncated_forward, truncated_backward })
    }
}

/// Random cyclically reduced words from a fixed seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampleSpec {
    pub count: usize,
    pub len: usize,
    pub seed: u64,
}

impl SampleSpec {
    pub fn words(&self, g: &Graph) -> Vec<CyclicWord> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.count).map(|_| random_cyclic_word(g, self.len, &mut rng)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSummary {
    pub word: String,
    /// Least n from which every computed forward distance is below U_tol.
    pub forward_entry: Option<usize>,
    pub backward_entry: Option<usize>,
    /// Least m such that for every computed n ≥ m the forward distance is
    /// below U_tol or the backward distance is below V_tol.
    pub m0: Option<usize>,
    pub forward_steps: usize,
    pub backward_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NsReport {
    pub samples: Vec<SampleSummary>,
    /// max over samples of m0, when every sample has one.
    pub m0: Option<usize>,
    /// Indices of samples where neither direction ends inside its neighborhood.
    pub violations: Vec<usize>,
    pub u_tol: f64,
    pub v_tol: f64,
    pub n_max: usize,
    pub radius: usize,
    pub budget: usize,
    #[serde(skip)]
    pub orbits: Vec<Orbit>,
}

/// Least n such that pred holds for every entry from n on.
fn entry(values: &[bool]) -> Option<usize> {
    let k = values.iter().rposition(|&b| !b).map_or(0, |i| i + 1);
    (k < values.len()).then_some(k)
}

impl NsReport {
    /// One row per sample per step.
    pub fn csv(&self) -> String {
        let mut out = String::from("sample,step,len,goodness,goodness_back,ilt,dist_plus,dist_minus\n");
        for (i, o) in self.orbits.iter().enumerate() {
            let mut rs: Vec<&OrbitRecord> = o.records.iter().collect();
            rs.sort_by_key(|r| r.step);
            for r in rs {
                out.push_str(&format!(
                    "{i},{},{},{:.12},{:.12},{},{:.12e},{:.12e}\n",
                    r.step, r.len, r.goodness, r.goodness_back, r.ilt, r.dist_plus, r.dist_minus
                ));
            }
        }
        out
    }
}

impl NsContext {
    pub fn ns_report(&self, words: &[CyclicWord], u_tol: f64, v_tol: f64, n_max: usize, mode: ExecMode) -> Result<NsReport> {
        let orbits = mode.map(words, |w| self.orbit(w, n_max));
        let orbits: Vec<Orbit> = orbits.into_iter().collect::<Result<_>>()?;
        let g = self.pair.forward.graph();
        let mut samples = Vec::new();
        let mut violations = Vec::new();
        for (i, (w, o)) in words.iter().zip(&orbits).enumerate() {
            let fwd: Vec<f64> = o.forward().map(|r| r.dist_plus).collect();
            let mut bwd: Vec<(i64, f64)> = o.backward().map(|r| (r.step, r.dist_minus)).collect();
            bwd.sort_by_key(|r| -r.0);
            let bwd: Vec<f64> = bwd.into_iter().map(|r| r.1).collect();
            let span = fwd.len().max(bwd.len());
            let ok: Vec<bool> = (0..span)
                .map(|n| fwd.get(n).is_some_and(|&d| d < u_tol) || bwd.get(n).is_some_and(|&d| d < v_tol))
                .collect();
            let m0 = entry(&ok);
            if m0.is_none() {
                violations.push(i);
            }
            samples.push(SampleSummary {
                word: w.display(g),
                forward_entry: entry(&fwd.iter().map(|&d| d < u_tol).collect::<Vec<_>>()),
                backward_entry: entry(&bwd.iter().map(|&d| d < v_tol).collect::<Vec<_>>()),
                m0,
                forward_steps: fwd.len() - 1,
                backward_steps: bwd.len() - 1,
            });
        }
        let m0 = if violations.is_empty() { samples.iter().filter_map(|s| s.m0).max() } else { None };
        Ok(NsReport {
            samples,
            m0,
            violations,
            u_tol,
            v_tol,
            n_max,
            radius: self.index_fwd.radius(),
            budget: self.budget,
            orbits,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackForth {
    /// Per sample: least M such that (a) or (b) holds for all M ≤ n ≤ n_probe.
    pub per_sample: Vec<Option<usize>>,
    pub m: Option<usize>,
    pub violations: Vec<usize>,
    pub delta: f64,
}

impl AutomorphismPair {
    /// For each word: from which n on 𝔤([fⁿ(γ)]) ≥ δ or 𝔤′([f′ⁿ(γ′)]) ≥ δ,
    /// iterating the base maps within the word budget.
    pub fn verify_backforth(&self, words: &[CyclicWord], delta: f64, n_probe: usize, budget: usize) -> Result<BackForth> {
        let mut per_sample = Vec::new();
        for w in words {
            let mut a = Vec::new();
            let mut x = w.clone();
            for _ in 0..=n_probe {
                a.push(self.forward.goodness(&x)?.goodness_f64() >= delta);
                x = self.forward.base().apply_cyclic(&x);
                if x.len() > budget {
                    break;
                }
            }
            let mut b = Vec::new();
            let mut y = self.h.apply_cyclic(w)?;
            for _ in 0..=n_probe {
                b.push(self.backward.goodness(&y)?.goodness_f64() >= delta);
                y = self.backward.base().apply_cyclic(&y);
                if y.len() > budget {
                    break;
                }
            }
            let span = a.len().min(b.len());
            let ok: Vec<bool> = (0..span).map(|n| a[n] || b[n]).collect();
            per_sample.push(entry(&ok));
        }
        let violations: Vec<usize> = per_sample.iter().enumerate().filter(|(_, m)| m.is_none()).map(|(i, _)| i).collect();
        let m = if violations.is_empty() { per_sample.iter().flatten().copied().max() } else { None };
        Ok(BackForth { per_sample, m, violations, delta })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSample {
    pub word: String,
    pub goodness: f64,
    /// First step at which the distance to Δ₊ drops below each probe.
    pub first_entry: Vec<Option<usize>>,
    /// Steps of fˢ predicted by the goodness recursion to reach 1 − ε.
    pub predicted_good_steps: Option<usize>,
    /// Whether the distance sequence stays below each probe after entry.
    pub stays: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub delta: f64,
    pub probes: Vec<f64>,
    pub excluded: usize,
    pub samples: Vec<ThresholdSample>,
}

/// Iterates 𝔤 ↦ 1/(1 + (2C/λ′ˢ)(1/𝔤 − 1)) from g until it reaches 1 − ε.
pub fn predicted_steps(g: f64, c: f64, lambda_s: f64, eps: f64, cap: usize) -> Option<usize> {
    let mut x = g;
    for k in 0..=cap {
        if x >= 1.0 - eps {
            return Some(k);
        }
        if x <= 0.0 {
            return None;
        }
        x = 1.0 / (1.0 + (2.0 * c / lambda_s) * (1.0 / x - 1.0));
    }
    None
}

impl TrainTrack {
    /// Orbits of words with goodness at least δ, with first entries into
    /// shrinking neighborhoods of Δ₊ (distances at the given radius).
    pub fn goodness_threshold_experiment(
        &self,
        simplex: &LimitSimplex,
        delta: f64,
        words: &[CyclicWord],
        probes: &[f64],
        n_max: usize,
        budget: usize,
    ) -> Result<ThresholdReport> {
        let index = simplex.vertices[0].current.index().clone();
        let c = crate::tt::rational_f64(self.critical());
        let s = self.goodness_monotone_power();
        let lambda_s = (self.bounds().lambda_min as f64).powi(s as i32);
        let mut samples = Vec::new();
        let mut excluded = 0;
        for w in words {
            let g0 = self.goodness(w)?.goodness_f64();
            if g0 < delta {
                excluded += 1;
                continue;
            }
            let mut d = Vec::new();
            let mut x = w.clone();
            for _ in 0..=n_max {
                d.push(distance_to_simplex(&counting_current(&index, &x)?, simplex)?.distance);
                let next = self.base().apply_cyclic(&x);
                if next.len() > budget {
                    break;
                }
                x = next;
            }
            let first_entry: Vec<Option<usize>> = probes.iter().map(|&p| d.iter().position(|&v| v < p)).collect();
            let stays = probes.iter().map(|&p| entry(&d.iter().map(|&v| v < p).collect::<Vec<_>>()).is_some()).collect();
            samples.push(ThresholdSample {
                word: w.display(self.graph()),
                goodness: g0,
                first_entry,
                predicted_good_steps: predicted_steps(g0, c, lambda_s, probes.iter().cloned().fold(f64::INFINITY, f64::min), 10_000),
                stays,
            });
        }
        Ok(ThresholdReport { delta, probes: probes.to_vec(), excluded, samples })
    }
}

/// One-point union of graphs at designated vertices fixed by their maps.
pub fn wedge_product(factors: &[(GraphMap, Vertex)]) -> Result<GraphMap> {
    if factors.is_empty() {
        return Err(Error::Precondition("no factors".into()));
    }
    if factors.len() == 1 {
        return Ok(factors[0].0.clone());
    }
    for (i, (f, v)) in factors.iter().enumerate() {
        if f.vertex_image(*v) != *v {
            return Err(Error::Precondition(format!(
                "factor {} moves its wedge vertex {}",
                i + 1,
                f.graph().vertex_name(*v)
            )));
        }
    }
    let mut all_names: Vec<String> = Vec::new();
    for (f, _) in factors {
        all_names.extend(f.graph().positive_edges().map(|e| f.graph().edge_name(e)));
    }
    let clash = {
        let mut s = all_names.clone();
        s.sort();
        s.windows(2).any(|w| w[0] == w[1])
    };
    let mut vnames = vec!["v".to_string()];
    let mut edges = Vec::new();
    let mut offsets = Vec::new();
    let mut vmaps = Vec::new();
    for (i, (f, wv)) in factors.iter().enumerate() {
        let g = f.graph();
        let vmap: Vec<Vertex> = (0..g.num_vertices() as Vertex)
            .map(|u| {
                if u == *wv {
                    0
                } else {
                    vnames.push(format!("{}{}", g.vertex_name(u), i + 1));
                    (vnames.len() - 1) as Vertex
                }
            })
            .collect();
        offsets.push(2 * edges.len() as Edge);
        for e in g.positive_edges() {
            let name = if clash { format!("{}{}", g.edge_name(e), i + 1) } else { g.edge_name(e) };
            edges.push((name, vmap[g.origin(e) as usize], vmap[g.terminus(e) as usize]));
        }
        vmaps.push(vmap);
    }
    if vnames.len() > 1 && vnames[1..].contains(&vnames[0]) {
        vnames[0] = "v0".into();
    }
    let graph = Graph::new(vnames, edges)?;
    let mut images = Vec::new();
    for ((f, _), &off) in factors.iter().zip(&offsets) {
        for e in f.graph().positive_edges() {
            images.push(f.image(e).iter().map(|&x| x + off).collect());
        }
    }
    GraphMap::new(graph, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tt::fixtures::*;

    fn plastic_pair() -> AutomorphismPair {
        AutomorphismPair::on_rose(plastic(), plastic_inv()).unwrap()
    }

    fn ctx(pair: AutomorphismPair) -> NsContext {
        NsContext::new(pair, 2, 1e-9, 1e-6, 1e-6, 200_000, ExecMode::Sequential).unwrap()
    }

    #[test]
    fn pair_validation() {
        let p = plastic_pair();
        assert_eq!(p.lipschitz_b, 1.0);
        assert!(AutomorphismPair::on_rose(plastic(), plastic()).is_err());
        let f = fib();
        let fi = fib_inv();
        assert!(AutomorphismPair::on_rose(f, fi).is_ok());
    }

    #[test]
    fn basis_of_theta_graph() {
        let g = Graph::new(
            vec!["u".into(), "w".into()],
            vec![("a".into(), 0, 1), ("b".into(), 0, 1), ("c".into(), 0, 1)],
        )
        .unwrap();
        let b = basis_loops(&g);
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|w| w.len() == 2));
    }

    #[test]
    fn orbit_of_length_zero() {
        let c = ctx(plastic_pair());
        let g = c.pair.forward.graph().clone();
        let w = CyclicWord::new(&g, g.parse_word("abC").unwrap()).unwrap();
        let o = c.orbit(&w, 0).unwrap();
        assert_eq!(o.records.len(), 1);
        assert_eq!(o.records[0].step, 0);
    }

    #[test]
    fn plastic_orbits_converge_both_ways() {
        let c = ctx(plastic_pair());
        let g = c.pair.forward.graph().clone();
        let words = SampleSpec { count: 4, len: 12, seed: 7 }.words(&g);
        let r = c.ns_report(&words, 1e-3, 1e-3, 40, ExecMode::Sequential).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.samples);
        for s in &r.samples {
            assert!(s.forward_entry.is_some() && s.backward_entry.is_some());
        }
        for o in &r.orbits {
            let ilts: Vec<usize> = o.forward().map(|x| x.ilt).collect();
            assert!(ilts.windows(2).all(|p| p[1] <= p[0]));
        }
        let csv = r.csv();
        assert!(csv.lines().count() > words.len());
    }

    #[test]
    fn swapping_exchanges_simplices() {
        let c = ctx(plastic_pair());
        let s = c.swapped();
        let g = c.pair.forward.graph().clone();
        let w = CyclicWord::new(&g, g.parse_word("abAc").unwrap()).unwrap();
        let a = c.orbit(&w, 6).unwrap();
        let b = s.orbit(&w, 6).unwrap();
        for r in &a.records {
            let m = b.records.iter().find(|x| x.step == -r.step).unwrap();
            assert_eq!((r.dist_plus, r.dist_minus), (m.dist_minus, m.dist_plus));
            assert_eq!(r.len, m.len);
        }
    }

    #[test]
    fn commutator_never_converges_for_fibonacci() {
        let fi = fib_inv();
        let c = ctx(AutomorphismPair::on_rose(fib(), fi).unwrap());
        let g = c.pair.forward.graph().clone();
        let w = CyclicWord::new(&g, g.parse_word("abAB").unwrap()).unwrap();
        let r = c.ns_report(&[w], 1e-3, 1e-3, 20, ExecMode::Sequential).unwrap();
        assert_eq!(r.violations, vec![0]);
        assert!(r.orbits[0].records.iter().all(|x| x.len == 4));
    }

    #[test]
    fn backforth_on_plastic() {
        let p = plastic_pair();
        let g = p.forward.graph().clone();
        let words = SampleSpec { count: 20, len: 20, seed: 3 }.words(&g);
        let r = p.verify_backforth(&words, 0.05, 30, 200_000).unwrap();
        assert!(r.violations.is_empty());
        let legal = CyclicWord::new(&g, g.parse_word("abc").unwrap()).unwrap();
        assert_eq!(p.verify_backforth(&[legal], 0.05, 5, 1000).unwrap().per_sample, vec![Some(0)]);
    }

    #[test]
    fn threshold_experiment_filters_and_converges() {
        let f = plastic();
        let simplex = f.build_simplex(2, 1e-9, 1e-6, 1e-6, ExecMode::Sequential).unwrap();
        let g = f.graph().clone();
        let words = SampleSpec { count: 10, len: 20, seed: 11 }.words(&g);
        let delta = 0.3;
        let r = f.goodness_threshold_experiment(&simplex, delta, &words, &[1e-1, 1e-2, 1e-3], 40, 200_000).unwrap();
        assert_eq!(r.samples.len() + r.excluded, words.len());
        for s in &r.samples {
            assert!(s.goodness >= delta);
            assert!(s.first_entry.iter().all(|x| x.is_some()), "{s:?}");
        }
        assert_eq!(predicted_steps(1.0, 4.0, 8.0, 1e-3, 10), Some(0));
    }

    #[test]
    fn adversarial_words_touch_inps_and_strata() {
        let f = fib();
        let s = f.find_inps();
        let ws = adversarial_words(&f, &s, 10, 1);
        assert!(ws.len() > s.inps.len());
        let t = wedge();
        let ws = adversarial_words(&t, &t.find_inps(), 12, 1);
        assert_eq!(ws.len(), 2);
        assert!(ws[0].edges().iter().all(|&e| e < 6));
        assert!(ws[1].edges().iter().all(|&e| e >= 6));
    }

    #[test]
    fn wedge_pair_orbits() {
        let c = ctx(AutomorphismPair::on_rose(wedge(), wedge_inv()).unwrap());
        assert_eq!(c.delta_plus.vertices.len(), 2);
        assert_eq!(c.delta_minus.vertices.len(), 2);
        let g = c.pair.forward.graph().clone();
        let confined = CyclicWord::new(&g, g.parse_word("abCab").unwrap()).unwrap();
        let o = c.orbit(&confined, 30).unwrap();
        let last = o.forward().last().unwrap();
        assert!(last.dist_plus < 1e-3);
        let a_vertex = c.delta_plus.vertices.iter().position(|v| v.edges.contains(&"a".to_string())).unwrap();
        assert!(last.coeff_plus[a_vertex] > 0.99);
        let mu = c.pair.forward.orbit_current(&c.index_fwd, &confined, 30, c.budget).unwrap();
        let d = crate::currents::projective_distance(&mu.current, &c.delta_plus.vertices[a_vertex].current).unwrap();
        assert!(d < 1e-3, "{d}");
        assert!(o.backward().last().unwrap().dist_minus < 1e-3);
        let words = SampleSpec { count: 6, len: 20, seed: 9 }.words(&g);
        let r = c.ns_report(&words, 1e-3, 1e-3, 40, ExecMode::Sequential).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.samples);
    }

    #[test]
    fn wedge_examples() {
        let p = plastic();
        let single = wedge_product(&[(p.base().clone(), 0)]).unwrap();
        assert_eq!(&single, p.base());
        let w = wedge_product(&[(p.base().clone(), 0), (p.map().clone(), 0)]).unwrap();
        assert_eq!(w.display(), "a1 -> b1; b1 -> c1; c1 -> a1 b1; a2 -> a2 b2; b2 -> b2 c2; c2 -> c2 a2 b2");
        let t = TrainTrack::new(w, 8).unwrap();
        let s = t.build_simplex(2, 1e-9, 1e-6, 1e-6, ExecMode::Sequential).unwrap();
        assert_eq!(s.vertices.len(), 2);
        assert_eq!(s.uniform_faces.len(), 2);
        let three = wedge_product(&[(p.base().clone(), 0), (p.map().clone(), 0), (p.base().clone(), 0)]).unwrap();
        let t3 = TrainTrack::new(three, 8).unwrap();
        let s3 = t3.build_simplex(2, 1e-9, 1e-6, 1e-6, ExecMode::Sequential).unwrap();
        assert_eq!(s3.vertices.len(), 3);
        assert_eq!(s3.uniform_faces.len(), 2);
        let theta = Graph::new(vec!["u".into(), "w".into()], vec![("a".into(), 0, 1), ("b".into(), 1, 0)]).unwrap();
        let swap = GraphMap::new(theta, vec![vec![2], vec![0]]).unwrap();
        assert!(wedge_product(&[(swap, 0), (p.base().clone(), 0)]).is_err());
    }
}
