//! Rydberg-EIT photon-photon interactions in an atom-filled hollow-core waveguide.
//!
//! Two weak counter-propagating fields travel as slow dark-state polaritons
//! and interact through the dipole-dipole coupling of their Rydberg
//! components. The crate evaluates the effective 1D interaction, the
//! resulting conditional phases, the validity conditions of the
//! dissipation-free solution and the homodyne QND photon-number readout.

pub mod constants;
pub mod constraints;
pub mod ddi;
pub mod error;
pub mod medium;
pub mod parallel;
pub mod propagation;
pub mod qnd;
pub mod quadrature;
pub mod scenario;
pub mod special;

pub use error::{Error, Result};
