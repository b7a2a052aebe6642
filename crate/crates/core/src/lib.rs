//! Train track maps on finite graphs, their currents and North-South
//! dynamics experiments for free group automorphisms.

pub mod currents;
pub mod dsl;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod graph;
pub mod map;
pub mod substitution;
pub mod tt;

pub use error::{Error, Result};
