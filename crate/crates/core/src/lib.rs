//! Numerical laboratory for entanglement-assisted binary interferometry.
//!
//! A probe state is sent through a device that may or may not apply a small
//! unitary perturbation (displacement, single-mode squeezing or a two-mode
//! phase shift). The crate computes input/output overlaps in truncated Fock
//! space, the optimal Neyman-Pearson decision built on them, and the
//! zero-false-alarm difference-photocurrent scheme for twin-beam probes.
//!
//! Layout:
//! - [`fock`]: truncated Fock-space states, perturbation unitaries, special
//!   matrix elements and the brute-force overlap oracle.
//! - [`probes`]: probe families and their energy parametrization.
//! - [`overlap`]: closed-form overlaps, each paired with the oracle.
//! - [`decision`]: ROC, sensitivity threshold, Helstrom operator, polygon lemma.
//! - [`photocurrent`]: difference-photocurrent detection.
//! - [`sweep`]: configuration-driven batch sweeps and table output.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decision;
pub mod error;
pub mod fock;
pub mod overlap;
pub mod photocurrent;
pub mod probes;
pub mod sweep;

pub use error::{Error, Result};
pub use num_complex::Complex64;
