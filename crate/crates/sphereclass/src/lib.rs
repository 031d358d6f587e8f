//! Exact homology-class computations on rational and irrational ruled
//! 4-manifolds: intersection forms, reflection groups, genus invariants and
//! decision procedures for sphere representability.

pub mod classify;
pub mod cli;
pub mod configuration;
pub mod constructor;
pub mod diophantine;
pub mod dmgroup;
pub mod genus;
pub mod lattice;
pub mod literal;

pub use lattice::{Class, CohomologyClass, Manifold, RationalClass, RuledClass};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
