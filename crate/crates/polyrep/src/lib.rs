//! Exact polynomial-inequality descriptions of simple polytopes.
//!
//! Starting from a halfspace system with rational data, this crate validates
//! the input (bounded, irredundant, simple), enumerates its face lattice,
//! derives the metric quantities that calibrate an approximating polynomial,
//! and assembles a finite list of polynomials whose common nonnegativity set
//! is exactly the polytope. Everything on the decision path runs in exact
//! rational arithmetic.

pub mod construct;
pub mod error;
pub mod hrep;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod metrics;
pub mod num;
pub mod poly;
pub mod verify;

pub use error::{Error, Result};
