//! Computational core for principal-bundle constrained systems.
//!
//! - [`liealg`]: exact Lie-algebra engine (brackets, Killing form, coadjoint
//!   action, stabilizers).
//! - [`spencer`]: symmetric tensors, Spencer differentials, Chevalley–Eilenberg
//!   cohomology and Betti decomposition.
//! - [`cartan`]: characteristic integrator for `dλ + ad*_ω λ = 0`.
//! - [`euler2d`]: pseudo-spectral 2D incompressible Euler with material
//!   marker curves.
//! - [`invariants`]: total vorticity, Kelvin circulation, enstrophy and
//!   conservation reports.
//! - [`simulation`] and [`cartan_run`]: JSON-configured runs.
//! - [`io`]: field dumps, CSV series and PGM heatmaps.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cartan;
pub mod cartan_run;
pub mod error;
pub mod euler2d;
pub mod invariants;
pub mod io;
pub mod liealg;
pub mod linalg;
pub mod scalar;
pub mod simulation;
pub mod spencer;

pub use error::{Error, Result};
