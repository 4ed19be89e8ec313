//! Numerical laboratory for `x₃`-invariant Kapustin–Witten solutions on
//! `(0, ∞) × ℝ²`: closed-form families, lattice residuals of the reduced
//! equations and their derived identities, an axisymmetric relaxation solver
//! and small-t Riccati asymptotics.

pub mod asymptotics;
pub mod config;
pub mod error;
pub mod lattice;
pub mod model;
pub mod quad;
pub mod relax;
pub mod report;
pub mod residual;
pub mod su2;

pub use error::{Error, Result};
