//! Truncated Fock-space numerical core.

pub mod basis;
pub(crate) mod expm;
pub(crate) mod generator;
pub mod oracle;
pub mod perturbation;
pub mod special;
pub mod unitary;

pub use basis::{inner_product, tail_mass, Cutoff, FockVec, State, TwoModeFock};
pub use oracle::{
    brute_force_overlap, brute_force_overlap_auto, brute_force_overlap_with, evolve,
    initial_cutoff, perturbation_scale_sq, OracleConfig, OracleOverlap,
};
pub use perturbation::{Amplitude, Family, Perturbation, PerturbationKind, Target};
pub use special::{
    bessel_i0, bessel_i0_scaled, displacement_diag_element, phase_diag_element,
    squeeze_diag_element,
};
pub use unitary::{
    balanced_mixer, build_two_mode_unitary, build_unitary, build_unitary_with, OperatorMatrix,
    Space,
};
