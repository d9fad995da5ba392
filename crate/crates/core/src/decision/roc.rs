use serde::Serialize;

use crate::error::{invalid, Result};

/// False-alarm and detection probability of one decision strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub q0: f64,
    pub q_det: f64,
}

/// Neyman-Pearson working point: tolerated false alarm `q0` and required
/// acceptance ratio `gamma_star = Q_lambda / Q_0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivitySpec {
    q0: f64,
    gamma_star: f64,
}

impl SensitivitySpec {
    /// Requires `0 <= q0 < 1`, `gamma_star >= 1` and `gamma_star * q0 <= 1`.
    pub fn new(q0: f64, gamma_star: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q0) {
            return Err(invalid(format!("false-alarm probability {q0} outside [0, 1)")));
        }
        if !(gamma_star >= 1.0) || !gamma_star.is_finite() {
            return Err(invalid(format!("acceptance ratio {gamma_star} must be >= 1")));
        }
        if gamma_star * q0 > 1.0 {
            return Err(invalid(format!(
                "gamma* q0 = {} exceeds 1: the detection target is not a probability",
                gamma_star * q0
            )));
        }
        Ok(SensitivitySpec { q0, gamma_star })
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn gamma_star(&self) -> f64 {
        self.gamma_star
    }
}

/// Optimal detection probability for two pure states with overlap
/// `|kappa|^2`, at false-alarm probability `q0`.
pub fn detection_probability(q0: f64, kappa_sq: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q0) {
        return Err(invalid(format!("false-alarm probability {q0} outside [0, 1]")));
    }
    if !(0.0..=1.0).contains(&kappa_sq) {
        return Err(invalid(format!("overlap {kappa_sq} outside [0, 1]")));
    }
    if q0 > kappa_sq {
        return Ok(1.0);
    }
    let amp = (q0 * kappa_sq).sqrt() + ((1.0 - q0) * (1.0 - kappa_sq)).sqrt();
    Ok((amp * amp).min(1.0))
}

/// Overlap deficit `Lambda` such that `|kappa|^2 = 1 - Lambda` yields
/// detection probability `gamma_star * q0` at false alarm `q0`.
pub fn lambda_threshold(spec: &SensitivitySpec) -> f64 {
    let q = spec.q0;
    let g = spec.gamma_star;
    let radicand = (g * (1.0 - q) * (1.0 - g * q)).max(0.0);
    (q * (1.0 + g * (1.0 - 2.0 * q) - 2.0 * radicand.sqrt())).max(0.0)
}
