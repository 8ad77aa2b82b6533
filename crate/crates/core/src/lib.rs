//! Lattice-gas models whose ground states are non-periodic.
//!
//! The crate generates Thue-Morse, Sturmian and Wang-tile configurations,
//! evaluates translation-invariant interactions and the relative energy of
//! local excitations, measures patch-count discrepancies against the strict
//! boundary condition, scans excitation families for zero-temperature
//! instabilities and computes finite-volume Gibbs states, both exactly and
//! by Metropolis sampling.

pub mod error;
pub mod fmt;
pub mod gibbs;
pub mod hamiltonian;
pub mod lattice;
pub mod quadratic;
pub mod sbc;
pub mod stability;
pub mod symbolic;
pub mod wang;

pub use error::{Error, Result};
