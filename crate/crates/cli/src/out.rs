//! Number markers for JSON output.

use freetrack::currents::WeightFunction;
use serde::Serialize;
use serde_json::{json, Value};

/// An exact value.
pub fn exact<T: Serialize>(v: T) -> Value {
    json!({ "value": v, "exact": true })
}

/// A floating point value correct to within `tol`.
pub fn approx(x: f64, tol: f64) -> Value {
    json!({ "value": x, "tol": tol })
}

/// A weight function as path → value, with one tolerance for all entries.
pub fn weights(w: &WeightFunction) -> Value {
    json!({ "tol": w.tol, "values": w })
}
