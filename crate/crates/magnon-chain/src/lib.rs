//! Desk-scale simulator for dimerized superconducting-qubit chains in the
//! single-excitation sector.
//!
//! The crate covers the full numerical pipeline of a chiral-displacement
//! topology experiment on such a chain:
//!
//! - [`lattice`]: chain geometry, tridiagonal single-excitation
//!   Hamiltonians, exact spectra, analytic zero-energy edge and defect
//!   wavefunctions, finite-size edge-state hybridization.
//! - [`topology`]: momentum-space Bloch vector, the winding-number
//!   quadrature, and the analytic chiral-displacement formula with its
//!   long-time limit.
//! - [`dynamics`]: unitary evolution by eigendecomposition, a Lindblad
//!   master-equation integrator restricted to the vacuum ⊕ one-excitation
//!   block, and chiral-displacement trajectory extraction.
//! - [`drive`]: parametric-modulation coupling engineering: the Bessel
//!   sideband map from drive parameters to effective couplings, inverse
//!   amplitude design, and full time-dependent validation of the
//!   rotating-wave approximation.
//! - [`readout`]: synthetic finite-shot measurement with per-qubit
//!   confusion matrices and Bayes-rule inversion.
//! - [`scenario`]: named, configurable experiment presets with
//!   reproducible CSV/summary output, plus parameter sweeps.
//!
//! Units follow the hardware convention throughout: couplings and
//! modulation parameters are linear frequencies in MHz, times are in µs,
//! and every dynamical phase enters as `2π · f · t`.
//!
//! Start with the runnable programs under `examples/`, one per
//! capability, or the `magnon-chain` binary for config-driven runs.

pub mod drive;
pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod readout;
pub mod scenario;
pub mod topology;

pub use error::{Error, Result};
