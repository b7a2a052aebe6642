//! Explicit constants of the goodness dichotomy.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::inp::Pl;
use super::{InpSearch, TrainTrack};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TtConstants {
    pub c_f: u64,
    pub lambda_min: u64,
    pub lambda_max: u64,
    /// Critical constant C = C_f / (λ′ − 1).
    #[serde(serialize_with = "crate::tt::ser_rational")]
    pub critical_c: BigRational,
    /// ⌈C⌉.
    pub cutoff: usize,
    /// A(f).
    pub a: usize,
    #[serde(serialize_with = "crate::tt::ser_rational")]
    pub delta: BigRational,
    #[serde(serialize_with = "crate::tt::ser_rational")]
    pub r_dich: BigRational,
    /// Least s with λ′ˢ ≥ 2⌈C⌉.
    pub s_good: usize,
    /// Least s with every |fˢ(e)| ≥ 2⌈C⌉ + 1 and s ≥ the stabilization time.
    pub s_bad: usize,
    /// Exponent used in the dichotomy: max(s_good, s_bad).
    pub s_dich: usize,
    /// Stabilization time of the pair automaton.
    pub stabilization: usize,
}

/// δ = 1 / (2C(A + 2) + 1).
pub fn delta(c: &BigRational, a: usize) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let a = BigRational::from_integer(BigInt::from(a));
    BigRational::one() / (two.clone() * c * (a + two) + BigRational::one())
}

/// R = 1 + 1 / (2C(2(A + 1) + 1) + 2(A + 1) + 2).
pub fn r_dich(c: &BigRational, a: usize) -> BigRational {
    let int = |x: usize| BigRational::from_integer(BigInt::from(x));
    let den = int(2) * c * int(2 * (a + 1) + 1) + int(2 * (a + 1) + 2);
    BigRational::one() + BigRational::one() / den
}

impl TrainTrack {
    /// Least s ≥ 1 with min |fˢ(e)| ≥ `target`.
    pub fn least_uniform_length(&self, target: usize) -> usize {
        let mut pl = Pl::new(self.map());
        let t = BigUint::from(target);
        let mut s = 1;
        while self.graph().edges().any(|e| pl.len(s, e) < t) {
            s += 1;
        }
        s
    }

    pub fn dichotomy_constants(&self, a: usize, stabilization: usize) -> TtConstants {
        let c = self.critical().clone();
        let s_good = self.goodness_monotone_power();
        let s_bad = self.least_uniform_length(2 * self.cutoff() + 1).max(stabilization);
        TtConstants {
            c_f: self.cancellation_bound(),
            lambda_min: self.bounds().lambda_min,
            lambda_max: self.bounds().lambda_max,
            delta: delta(&c, a),
            r_dich: r_dich(&c, a),
            critical_c: c,
            cutoff: self.cutoff(),
            a,
            s_good,
            s_bad,
            s_dich: s_good.max(s_bad),
            stabilization,
        }
    }

    /// Constants from an INP search; fails for a closed Nielsen loop.
    pub fn constants(&self, search: &InpSearch) -> Result<TtConstants> {
        let a = self.multi_inp_bound(search)?;
        Ok(self.dichotomy_constants(a, search.stabilization))
    }
}
