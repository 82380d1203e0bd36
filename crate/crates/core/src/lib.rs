//! Exact quantum cluster algebra engine for decorated triangulations of polygons
//! with weight-one and weight-two vertices.

pub mod cli;
pub mod grading;
pub mod matrix;
pub mod qlaurent;
pub mod qseed;
pub mod qtorus;
pub mod surface;
pub mod webcat;
pub mod weight;
pub mod wquiver;

pub use grading::DegreeVector;
pub use qlaurent::QLaurent;
pub use qseed::{ExchangeRelation, QuantumSeed, SeedError};
pub use qtorus::{SkewForm, TorusElement};
pub use surface::{build_seed, DecoratedTriangulation, PiSource, Sign};
pub use weight::Weight;
