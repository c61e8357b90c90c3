//! Exact computations on bounded sequences with finitely many accumulation
//! points: canonical forms, multiplicity profiles of finite-dimensional spans,
//! constructors and refuters, plane-geometry escapes, and a numeric lab.

mod error;

pub mod certificate;
pub mod constructors;
pub mod engine;
pub mod exact;
pub mod geometry;
pub mod lab;
pub mod partitions;
pub mod sequence;

pub use engine::{multiplicity, profile, MultiplicityProfile, ValueMatrix};
pub use error::{Error, Result};
pub use exact::{Rat, RatMatrix};
pub use sequence::{combine, InfinitudeRelation, StepSequence, SymbolicPartition};

/// Version string stamped into certificates.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
