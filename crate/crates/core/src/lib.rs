//! Extended coupled SUSY on truncated Fock spaces.
//!
//! Four operators `(d, c, r, s)` with `dc = rs + gamma` and `cd = sr + delta`
//! generate four deformed su(1,1) triples whose raising and lowering parts are
//! not adjoint to each other. This crate builds those objects as dense
//! matrices on a truncated Fock space, constructs their biorthogonal
//! eigenfamilies and checks every ladder, Casimir and intertwining identity
//! numerically, with exact radical arithmetic for the normalization constants.
//! The complex-shifted harmonic oscillator is realized on a real grid and
//! bridged back to the matrix picture.

pub mod deform;
pub mod ecsusy;
pub mod error;
pub mod exactcoeff;
pub mod fock;
pub mod pseudoboson;
pub mod shifted_ho;
pub mod su11families;

pub use error::{Error, Result};
