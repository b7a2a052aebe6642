//! Subdividing the graph so that every INP and pre-INP endpoint is a vertex.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{InpSearch, Point, TrainTrack};
use crate::error::{Error, Result};
use crate::graph::{inv, is_positive, Edge, Graph};
use crate::map::GraphMap;

/// Cap on the number of points in the forward closure of the endpoints.
pub const ORBIT_BOUND: usize = 10_000;

/// A subdivided train track together with the way each old edge reads in
/// the new graph.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub track: TrainTrack,
    /// New edge path of each old oriented edge.
    pub edge_paths: Vec<Vec<Edge>>,
    /// Number of vertices added.
    pub added: usize,
}

impl Subdivision {
    pub fn translate(&self, w: &[Edge]) -> Vec<Edge> {
        w.iter().flat_map(|&e| self.edge_paths[e as usize].iter().copied()).collect()
    }
}

impl TrainTrack {
    /// Image of a point under the piecewise linear model of f.
    pub fn point_image(&self, p: &Point) -> Point {
        match p {
            Point::Vertex(v) => Point::Vertex(self.map().vertex_image(*v)),
            Point::Interior { edge, at } => {
                let img = self.map().image(*edge);
                let s = at * BigRational::from_integer(BigInt::from(img.len()));
                let idx: usize = s.floor().to_integer().try_into().unwrap();
                let frac = s - BigRational::from_integer(BigInt::from(idx));
                if frac.is_zero() {
                    Point::Vertex(self.graph().origin(img[idx]))
                } else {
                    Point::on(self.graph(), img[idx], &frac)
                }
            }
        }
    }

    /// Subdivides at every interior endpoint of a detected INP or pre-INP
    /// and at its forward orbit, then re-derives the train track data.
    pub fn subdivide_at_inp_endpoints(&self, search: &InpSearch, max_power: usize) -> Result<Subdivision> {
        let g = self.graph();
        let mut todo: Vec<Point> = Vec::new();
        for eta in search.inps.iter().chain(&search.pre_inps) {
            todo.push(eta.start_point(g));
            todo.push(eta.end_point(g));
        }
        let mut cuts: BTreeMap<Edge, BTreeSet<BigRational>> = BTreeMap::new();
        let mut count = 0;
        while let Some(p) = todo.pop() {
            if let Point::Interior { edge, at } = &p {
                if cuts.entry(*edge).or_default().insert(at.clone()) {
                    count += 1;
                    if count > ORBIT_BOUND {
                        return Err(Error::NoConvergence(format!(
                            "endpoint orbits exceed {ORBIT_BOUND} points"
                        )));
                    }
                    todo.push(self.point_image(&p));
                }
            }
        }
        if count == 0 {
            let edge_paths = g.edges().map(|e| vec![e]).collect();
            return Ok(Subdivision { track: self.clone(), edge_paths, added: 0 });
        }

        // New vertices and edges.
        let mut vnames: Vec<String> = (0..g.num_vertices()).map(|v| g.vertex_name(v as u32).to_string()).collect();
        let mut edges = Vec::new();
        // For each old positive edge: cut fractions and the new positive edges.
        let mut pieces: Vec<(Vec<BigRational>, Vec<Edge>)> = Vec::new();
        for e in g.positive_edges() {
            let fr: Vec<BigRational> = cuts.get(&e).map(|s| s.iter().cloned().collect()).unwrap_or_default();
            let name = g.edge_name(e);
            let mut ids = Vec::new();
            let mut from = g.origin(e);
            for i in 0..=fr.len() {
                let to = if i == fr.len() {
                    g.terminus(e)
                } else {
                    vnames.push(format!("{name}@{}", super::rational_string(&fr[i])));
                    (vnames.len() - 1) as u32
                };
                let piece_name = if fr.is_empty() { name.clone() } else { format!("{name}{}", i + 1) };
                ids.push(2 * edges.len() as Edge);
                edges.push((piece_name, from, to));
                from = to;
            }
            pieces.push((fr, ids));
        }
        let added = vnames.len() - g.num_vertices();
        let ng = Graph::new(vnames, edges)?;

        // Pieces of oriented old edge d covering fractions [lo, hi] along d.
        let span = |d: Edge, lo: &BigRational, hi: &BigRational| -> Vec<Edge> {
            let (fr, ids) = &pieces[(d >> 1) as usize];
            let (plo, phi) = if is_positive(d) {
                (lo.clone(), hi.clone())
            } else {
                (BigRational::one() - hi, BigRational::one() - lo)
            };
            let mut out: Vec<Edge> = (0..ids.len())
                .filter(|&i| {
                    let a = if i == 0 { BigRational::zero() } else { fr[i - 1].clone() };
                    let b = if i == fr.len() { BigRational::one() } else { fr[i].clone() };
                    a >= plo && b <= phi
                })
                .map(|i| ids[i])
                .collect();
            if !is_positive(d) {
                out.reverse();
                out.iter_mut().for_each(|x| *x = inv(*x));
            }
            out
        };
        let mut edge_paths = vec![Vec::new(); g.num_edges()];
        for e in g.positive_edges() {
            edge_paths[e as usize] = span(e, &BigRational::zero(), &BigRational::one());
            edge_paths[inv(e) as usize] = span(inv(e), &BigRational::zero(), &BigRational::one());
        }

        let mut images = Vec::new();
        for e in g.positive_edges() {
            let img = self.map().image(e);
            let m = BigRational::from_integer(BigInt::from(img.len()));
            let (fr, _) = &pieces[(e >> 1) as usize];
            let mut bounds = vec![BigRational::zero()];
            bounds.extend(fr.iter().cloned());
            bounds.push(BigRational::one());
            for w in bounds.windows(2) {
                let (a, b) = (&w[0] * &m, &w[1] * &m);
                let mut word = Vec::new();
                let first: usize = a.floor().to_integer().try_into().unwrap();
                let last: usize = b.ceil().to_integer().try_into().unwrap();
                for (j, &y) in img.iter().enumerate().take(last).skip(first) {
                    let base = BigRational::from_integer(BigInt::from(j));
                    let lo = (&a - &base).max(BigRational::zero());
                    let hi = (&b - &base).min(BigRational::one());
                    word.extend(span(y, &lo, &hi));
                }
                images.push(word);
            }
        }
        let f = GraphMap::new(ng, images)?;
        let track = TrainTrack::new(f, max_power)?;
        Ok(Subdivision { track, edge_paths, added })
    }
}
