//! Binary decision between an unperturbed and a perturbed probe.

pub mod helstrom;
pub mod polygon;
pub mod roc;
pub mod sensitivity;

pub use helstrom::{helstrom_np, helstrom_roc, positive_projector, pure_density, HelstromResult};
pub use polygon::{closest_hull_point, optimal_probe_superposition, polygon_min_overlap, EigenPhasePolygon};
pub use roc::{detection_probability, lambda_threshold, RocPoint, SensitivitySpec};
pub use sensitivity::{default_envelope, min_detectable, min_detectable_for_lambda, SensitivityResult};
