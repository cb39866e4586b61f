//! Self-similar (Barenblatt) source solutions of the time-fractional porous
//! medium equation.
//!
//! The crate computes the compactly supported self-similar profile U(z) on
//! [-z0, 0] from a nonlinear Volterra integral equation by product
//! integration, matches the support half-width z0 to a prescribed total
//! mass, and reconstructs the space-time solution u(x, t) from the profile.

// Quadrature node tables and pinned reference values carry their full
// decimal expansions on purpose.
#![allow(clippy::excessive_precision)]

pub mod classical;
pub mod error;
pub mod kernel;
pub mod mass_match;
pub mod order;
pub mod profile;
pub mod quad;
pub mod reconstruct;
pub mod specfun;

pub use error::Error;
pub use kernel::FractionalParams;
pub use mass_match::MassMatchResult;
pub use order::OrderReport;
pub use profile::{Grid, Profile};
pub use reconstruct::SpaceTimeSolution;
