//! Syzygies of generic projections of canonical and paracanonical curves.
//!
//! Random g-nodal rational curves over a prime field stand in for generic
//! smooth curves: Koszul cohomology dimensions are upper semicontinuous, so a
//! Betti number that vanishes on a random nodal instance vanishes for the
//! generic curve, while a nonzero value is evidence only.
//!
//! The pipeline is
//!
//! 1. [`curve`]: build a nodal model and the numerators of its section basis;
//! 2. [`projection`]: drop a generic point, leaving a hyperplane `V` of sections;
//! 3. [`graded`]: graded pieces of the relevant module as polynomial subspaces;
//! 4. [`koszul`]: Koszul differentials, their ranks, and Betti tables;
//! 5. [`harness`]: rendering, fixtures, experiment records and sweeps.
//!
//! Runnable walkthroughs live in this crate's `examples/` directory.

pub mod curve;
pub mod error;
pub mod field;
pub mod graded;
pub mod harness;
pub mod koszul;
pub mod matrix;
pub mod poly;
pub mod projection;
pub mod rng;

pub use curve::{build_canonical_curve, build_paracanonical_curve, CurveKind, NodalCurveModel};
pub use error::{Error, Result};
pub use field::{FieldContext, DEFAULT_PRIME};
pub use graded::{Flavor, ModuleSlices, SectionSubspace};
pub use koszul::{BettiOptions, BettiTable, Strategy};
pub use matrix::FpMatrix;
pub use projection::{project_generic, ProjectionSpec, QuadricReport};
