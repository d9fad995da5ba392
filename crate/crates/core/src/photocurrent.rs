//! Difference-photocurrent detection on a twin-beam probe.
//!
//! The twin beam is a zero eigenstate of `a^dagger a - b^dagger b`, so with
//! no perturbation the difference count is always zero and the false-alarm
//! probability vanishes. Any outcome `d != 0` signals the perturbation.

use num_complex::Complex64;
use serde::Serialize;

use crate::decision::sensitivity::{bracketed_crossing, displacement_envelope, SQUEEZE_ENVELOPE};
use crate::error::{invalid, Error, Result};
use crate::fock::basis::check_tail;
use crate::fock::generator::{self, expm_action};
use crate::fock::special::{bessel_i0_scaled, displacement_diag_element, phase_diag_element, squeeze_diag_series};
use crate::fock::{
    evolve, initial_cutoff, perturbation_scale_sq, Amplitude, Cutoff, Family, OracleConfig, Perturbation,
    PerturbationKind,
};
use crate::probes::{synthesize_unchecked, synthesize_with, twin_beam_x, ProbeSpec};

/// The phase-shift search stops at `pi/4`: past it `P(d=0)` recovers towards 1.
pub const PHOTOCURRENT_PHASE_ENVELOPE: f64 = std::f64::consts::FRAC_PI_4;
/// Validity bound of the quadratic squeeze approximation, on `r^2 N`.
pub const SQUEEZE_APPROX_ENVELOPE: f64 = 0.1;
/// Validity bound of the quadratic phase approximation, on `phi^2 N^2`.
pub const PHASE_APPROX_ENVELOPE: f64 = 0.1;
/// The diagonal sum stops once the remaining twin-beam weight is below this.
const DIAGONAL_TAIL_TOL: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotocurrentResult {
    pub p_zero: f64,
    pub q_det: f64,
    pub q0: f64,
    /// Diagonal projections `|n,n>` summed.
    pub n_terms: usize,
    /// Cutoff-doubling delta for the brute-force route; bound on the
    /// neglected weight for the diagonal route.
    pub convergence_delta: f64,
}

impl PhotocurrentResult {
    fn new(p_zero: f64, n_terms: usize, convergence_delta: f64) -> Self {
        let p_zero = p_zero.clamp(0.0, 1.0);
        PhotocurrentResult {
            p_zero,
            q_det: 1.0 - p_zero,
            q0: 0.0,
            n_terms,
            convergence_delta,
        }
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return Err(invalid(format!("twin-beam parameter x = {x} outside [0, 1)")));
    }
    Ok(())
}

fn p_zero_at(x: f64, p: &Perturbation, c: Cutoff, tail_tol: f64) -> Result<f64> {
    let psi = synthesize_with(&ProbeSpec::TwinBeam(x), c, tail_tol)?;
    let out = evolve(&psi, p)?;
    Ok(out.as_two_mode().expect("twin beam is two-mode").zero_difference_mass())
}

/// `P(d = 0)` by evolving the whole twin beam at cutoff `c` and summing the
/// diagonal of the output amplitude matrix; repeated at `2c`.
pub fn p_zero_difference(x: f64, p: &Perturbation, c: Cutoff) -> Result<PhotocurrentResult> {
    p_zero_difference_with(x, p, c, &OracleConfig::default())
}

pub fn p_zero_difference_with(x: f64, p: &Perturbation, c: Cutoff, cfg: &OracleConfig) -> Result<PhotocurrentResult> {
    check_x(x)?;
    let coarse = p_zero_at(x, p, c, cfg.tail_tol)?;
    let fine_cut = c.doubled();
    let fine = p_zero_at(x, p, fine_cut, cfg.tail_tol)?;
    let delta = (fine - coarse).abs();
    if delta > cfg.convergence_tol {
        return Err(Error::Convergence {
            coarse_dim: c.dim(),
            fine_dim: fine_cut.dim(),
            coarse: Complex64::new(coarse, 0.0),
            fine: Complex64::new(fine, 0.0),
            delta,
            tol: cfg.convergence_tol,
        });
    }
    Ok(PhotocurrentResult::new(fine, fine_cut.dim(), delta))
}

/// `<n|U|n>` (or `<<n,n|V|n,n>>`) for every `n < count`.
fn diagonal_elements(p: &Perturbation, count: usize) -> Result<Vec<f64>> {
    match p.kind() {
        PerturbationKind::Displacement(a) => {
            let y = a.modulus().powi(2);
            Ok((0..count).map(|n| displacement_diag_element(n, y)).collect())
        }
        PerturbationKind::TwoModePhase(phi) => Ok((0..count).map(|n| phase_diag_element(n, phi)).collect()),
        PerturbationKind::Squeeze(z) => {
            let r = z.modulus();
            (0..count)
                .map(|n| match squeeze_diag_series(n, r) {
                    Ok(v) => Ok(v),
                    Err(Error::PrecisionLoss(_)) => squeeze_diag_by_action(n, r),
                    Err(e) => Err(e),
                })
                .collect()
        }
    }
}

/// `<n|S(r)|n>` from the Taylor action on `|n>`, with the single-mode cutoff
/// doubled until the result settles.
fn squeeze_diag_by_action(n: usize, r: f64) -> Result<f64> {
    let kind = PerturbationKind::Squeeze(Amplitude::real(r));
    let mut dim = (2 * n + 32).max(64);
    let mut prev: Option<f64> = None;
    while dim <= 1 << 16 {
        let g = generator::single_mode(kind, dim);
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[n] = Complex64::new(1.0, 0.0);
        let val = expm_action(&g, &v)[n].re;
        if let Some(p) = prev {
            if (val - p).abs() < 1e-13 {
                return Ok(val);
            }
        }
        prev = Some(val);
        dim *= 2;
    }
    Err(Error::PrecisionLoss(format!(
        "squeeze element <{n}|S({r})|{n}> did not settle below 2^16 levels"
    )))
}

/// `P(d = 0) = (1 - x^2) sum_n x^(2n) |<n|U|n>|^2`, exact in infinite
/// dimension for perturbations that are single-mode or conserve the total
/// photon number. The sum stops when the remaining weight `x^(2n)` drops
/// below `1e-16`.
pub fn p_zero_diagonal(x: f64, p: &Perturbation) -> Result<PhotocurrentResult> {
    check_x(x)?;
    p.validate()?;
    let x2 = x * x;
    let count = if x2 == 0.0 {
        1
    } else {
        (DIAGONAL_TAIL_TOL.ln() / x2.ln()).ceil().max(1.0) as usize
    };
    let diag = diagonal_elements(p, count)?;
    let mut w = 1.0 - x2;
    let mut sum = 0.0;
    for u in &diag {
        sum += w * u * u;
        w *= x2;
    }
    Ok(PhotocurrentResult::new(sum, count, x2.powi(count as i32)))
}

/// Brute-force `P(d=0)` with automatic cutoff, doubling until the twin-beam
/// tail and the cutoff-doubling delta meet the configured tolerances.
pub fn p_zero_difference_auto(x: f64, p: &Perturbation, cfg: &OracleConfig) -> Result<PhotocurrentResult> {
    check_x(x)?;
    let n = 2.0 * x * x / (1.0 - x * x);
    let mut c = initial_cutoff(n, perturbation_scale_sq(p));
    let mut last = None;
    while c.doubled().dim() <= cfg.max_dim_two_mode {
        let probe = synthesize_unchecked(&ProbeSpec::TwinBeam(x), c)?;
        if check_tail(&probe, cfg.tail_tol).is_err() {
            c = c.doubled();
            continue;
        }
        match p_zero_difference_with(x, p, c, cfg) {
            Ok(r) => return Ok(r),
            Err(e @ (Error::Convergence { .. } | Error::Truncation { .. })) => last = Some(e),
            Err(e) => return Err(e),
        }
        c = c.doubled();
    }
    Err(last.unwrap_or_else(|| invalid("twin beam does not fit below the two-mode cutoff limit")))
}

/// Closed-form `P(d=0)` at sensitivity parameter `lambda` (`|alpha|^2`, `r`
/// or `phi`). Displacement is exact:
/// `exp(-|alpha|^2 (1+N)) I_0(|alpha|^2 sqrt(N(N+2)))`. Squeeze and phase are
/// the quadratic approximations `1 - r^2 N` and `1 - phi^2 N^2 / 2`, refused
/// outside `r^2 N <= 0.1` and `phi^2 N^2 <= 0.1`.
pub fn closed_form_p_zero(family: Family, n: f64, lambda: f64) -> Result<f64> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(invalid(format!("mean photon number {n} must be finite and >= 0")));
    }
    if !lambda.is_finite() {
        return Err(invalid(format!("non-finite perturbation parameter {lambda}")));
    }
    match family {
        Family::Displacement => {
            let z = lambda * (n * (n + 2.0)).sqrt();
            Ok((-lambda * (1.0 + n) + z).exp() * bessel_i0_scaled(z))
        }
        Family::Squeeze => {
            let s = lambda * lambda * n;
            if s > SQUEEZE_APPROX_ENVELOPE {
                return Err(Error::OutOfEnvelope(format!(
                    "r^2 N = {s} exceeds {SQUEEZE_APPROX_ENVELOPE}; use p_zero_diagonal or p_zero_difference"
                )));
            }
            Ok(1.0 - s)
        }
        Family::TwoModePhase => {
            let s = (lambda * n).powi(2);
            if s > PHASE_APPROX_ENVELOPE {
                return Err(Error::OutOfEnvelope(format!(
                    "phi^2 N^2 = {s} exceeds {PHASE_APPROX_ENVELOPE}; use p_zero_diagonal or p_zero_difference"
                )));
            }
            Ok(1.0 - 0.5 * s)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotocurrentSensitivity {
    pub family: Family,
    pub n: f64,
    pub q_target: f64,
    /// `|alpha|^2`, `r` or `phi`.
    pub lambda_min: f64,
    pub p_zero: f64,
    pub iterations: usize,
    pub n_terms: usize,
}

/// Smallest perturbation whose zero-false-alarm detection probability
/// `1 - P(d=0)` reaches `q_target`, by bisection on [`p_zero_diagonal`].
pub fn min_detectable_photocurrent(family: Family, n: f64, q_target: f64) -> Result<PhotocurrentSensitivity> {
    if !(q_target > 0.0 && q_target < 1.0) {
        return Err(invalid(format!("detection target {q_target} outside (0, 1)")));
    }
    if !(n >= 0.0) || !n.is_finite() {
        return Err(invalid(format!("mean photon number {n} must be finite and >= 0")));
    }
    let x = twin_beam_x(n);
    let (envelope, guess) = match family {
        Family::Displacement => (displacement_envelope(n), q_target / (n + 1.0)),
        Family::Squeeze => (SQUEEZE_ENVELOPE, q_target.sqrt() / (n + 1.0)),
        Family::TwoModePhase => (PHOTOCURRENT_PHASE_ENVELOPE, q_target.sqrt() / (n + 1.0)),
    };
    let mut n_terms = 0;
    let c = bracketed_crossing(
        |lambda| {
            let r = p_zero_diagonal(x, &Perturbation::at_lambda(family, lambda, 0.0))?;
            n_terms = r.n_terms;
            Ok(r.p_zero)
        },
        1.0 - q_target,
        guess.min(envelope),
        envelope,
    )?;
    Ok(PhotocurrentSensitivity {
        family,
        n,
        q_target,
        lambda_min: c.lambda_min,
        p_zero: c.value,
        iterations: c.iterations,
        n_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unperturbed_probe_never_fires() {
        let r = p_zero_diagonal(0.6, &Perturbation::two_mode_phase(0.0)).unwrap();
        assert!((r.p_zero - 1.0).abs() < 1e-15);
        assert_eq!(r.q0, 0.0);
    }

    #[test]
    fn vacuum_reduces_to_coherent_overlap() {
        let p = Perturbation::displacement(Amplitude::from_polar(0.7, 0.3));
        let r = p_zero_diagonal(0.0, &p).unwrap();
        assert!((r.p_zero - (-0.49f64).exp()).abs() < 1e-15);
        assert!((closed_form_p_zero(Family::Displacement, 0.0, 0.49).unwrap() - (-0.49f64).exp()).abs() < 1e-15);
        assert_eq!(closed_form_p_zero(Family::Displacement, 7.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn quadratic_branches_have_envelopes() {
        assert!((closed_form_p_zero(Family::Squeeze, 2.0, 0.05).unwrap() - 0.995).abs() < 1e-15);
        assert!(matches!(
            closed_form_p_zero(Family::Squeeze, 100.0, 0.1),
            Err(Error::OutOfEnvelope(_))
        ));
        assert!(matches!(
            closed_form_p_zero(Family::TwoModePhase, 10.0, 0.1),
            Err(Error::OutOfEnvelope(_))
        ));
    }

    #[test]
    fn squeeze_action_fallback_matches_series() {
        for (n, r) in [(0, 0.3), (5, 0.3), (12, 0.8)] {
            let a = squeeze_diag_by_action(n, r).unwrap();
            let b = squeeze_diag_series(n, r).unwrap();
            assert!((a - b).abs() < 1e-11, "{n} {r}: {a} vs {b}");
        }
    }

    #[test]
    fn displacement_sensitivity_inverts_closed_form() {
        let s = min_detectable_photocurrent(Family::Displacement, 10.0, 0.2).unwrap();
        let p = closed_form_p_zero(Family::Displacement, 10.0, s.lambda_min).unwrap();
        assert!((p - 0.8).abs() < 1e-9);
    }

    #[test]
    fn bad_targets_are_rejected() {
        assert!(min_detectable_photocurrent(Family::Squeeze, 3.0, 0.0).is_err());
        assert!(min_detectable_photocurrent(Family::Squeeze, 3.0, 1.0).is_err());
        assert!(p_zero_diagonal(1.0, &Perturbation::two_mode_phase(0.1)).is_err());
    }
}
