//! Train track analysis: goodness, illegal turns, periodic Nielsen paths,
//! subdivision, decompositions and the constants of the dichotomy.

pub mod constants;
pub mod decompose;
pub mod goodness;
pub mod inp;
pub mod nielsen;
pub mod subdivide;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{Edge, Graph};
use crate::map::{crossed_turn, ExpansionBounds, GraphMap, Turn, TurnClassification};

pub use constants::TtConstants;
pub use goodness::GoodnessReport;
pub use inp::{Branch, InpSearch, NielsenKind, NielsenPath, Point};
pub use subdivide::Subdivision;

/// Default cap when searching for an expanding power.
pub const DEFAULT_MAX_POWER: usize = 32;

/// An expanding train track representative together with its derived data:
/// gates, legal continuations, the cancellation bound and the critical
/// constant C = C_f / (λ′ − 1).
#[derive(Debug, Clone, Serialize)]
pub struct TrainTrack {
    base: GraphMap,
    map: GraphMap,
    power: usize,
    turns: TurnClassification,
    #[serde(skip)]
    cont: Vec<Vec<Edge>>,
    c_f: u64,
    bounds: ExpansionBounds,
    #[serde(serialize_with = "crate::tt::ser_rational")]
    critical: BigRational,
    cutoff: usize,
}

pub(crate) fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(x))
}

pub(crate) fn ser_intervals<S: serde::Serializer>(
    x: &[(BigRational, BigRational)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(x.len()))?;
    for (a, b) in x {
        seq.serialize_element(&[rational_string(a), rational_string(b)])?;
    }
    seq.end()
}

pub fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rational_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl TrainTrack {
    /// Passes to the least expanding power of `f` (contracting an invariant
    /// forest if needed) and validates the train track property there.
    pub fn new(f: GraphMap, max_power: usize) -> Result<TrainTrack> {
        let (m, k) = f.make_expanding(max_power)?;
        let base = if m.graph() == f.graph() { f } else { m.clone() };
        let mut tt = TrainTrack::from_expanding(m)?;
        tt.base = base;
        tt.power = k;
        Ok(tt)
    }

    /// Uses `f` itself, which must be an expanding train track map.
    pub fn from_expanding(f: GraphMap) -> Result<TrainTrack> {
        let bounds = f.expansion_bounds()?;
        let c_f = f.cancellation_bound()?;
        let turns = f.classify_turns();
        let cont = f.legal_continuations(&turns);
        let critical = BigRational::new(BigInt::from(c_f), BigInt::from(bounds.lambda_min - 1));
        let cutoff = critical.ceil().to_integer().to_usize().expect("small constant");
        Ok(TrainTrack { base: f.clone(), map: f, power: 1, turns, cont, c_f, bounds, critical, cutoff })
    }

    pub fn graph(&self) -> &Graph {
        self.map.graph()
    }

    /// The expanding power actually analysed.
    pub fn map(&self) -> &GraphMap {
        &self.map
    }

    /// The map as supplied, on the same graph when no contraction occurred.
    pub fn base(&self) -> &GraphMap {
        &self.base
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn turns(&self) -> &TurnClassification {
        &self.turns
    }

    pub fn cancellation_bound(&self) -> u64 {
        self.c_f
    }

    pub fn bounds(&self) -> ExpansionBounds {
        self.bounds
    }

    /// The critical constant C.
    pub fn critical(&self) -> &BigRational {
        &self.critical
    }

    /// ⌈C⌉, the edge-distance threshold for goodness.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Legal one-edge continuations of `e`.
    pub fn continuations(&self, e: Edge) -> &[Edge] {
        &self.cont[e as usize]
    }

    pub fn is_legal_turn(&self, t: Turn) -> bool {
        self.turns.is_legal(t)
    }

    pub fn is_legal_junction(&self, a: Edge, b: Edge) -> bool {
        self.turns.is_legal(crossed_turn(a, b))
    }

    /// Junction indices j (between w[j−1] and w[j]) crossing an illegal
    /// turn. Cyclic words include the wrap-around junction 0.
    pub fn illegal_junctions(&self, w: &[Edge], cyclic: bool) -> Vec<usize> {
        let n = w.len();
        if n == 0 {
            return Vec::new();
        }
        let first = if cyclic { 0 } else { 1 };
        (first..n)
            .filter(|&j| !self.is_legal_junction(w[(j + n - 1) % n], w[j]))
            .collect()
    }

    /// Number of illegal turns crossed by a loop.
    pub fn ilt(&self, w: &[Edge]) -> usize {
        self.illegal_junctions(w, true).len()
    }

    /// Number of illegal turns crossed by a path.
    pub fn ilt_path(&self, w: &[Edge]) -> usize {
        self.illegal_junctions(w, false).len()
    }

    pub fn is_legal_path(&self, w: &[Edge]) -> bool {
        self.turns.is_legal_path(w)
    }

    /// Loop analogue of `is_legal_path`, including the wrap-around turn.
    pub fn is_legal_loop(&self, w: &[Edge]) -> bool {
        self.ilt(w) == 0
    }
}
