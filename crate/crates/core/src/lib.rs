//! Hydrodynamics of quantum states.
//!
//! * [`linalg`]: state vectors, Hermitian observables, dispersion, evolution.
//! * [`riemann`]: finite-difference Riemannian geometry on coordinate charts,
//!   with residual checks for the Killing/Euler identities.
//! * [`projective`]: `CP^n` with the Fubini–Study metric and fundamental fields.
//! * [`fluid`]: the Schrödinger fluid (pressure, critical points, vorticity,
//!   Zeno decay, trajectories).
//! * [`spin`]: spin wavefunctions as polynomials, Madelung velocity and
//!   circulation.
//! * [`io`]: JSON input schemas and report types.

pub mod error;
pub mod fluid;
pub mod io;
pub mod linalg;
pub mod projective;
pub mod riemann;
pub mod spin;

pub use error::{Error, Result};
