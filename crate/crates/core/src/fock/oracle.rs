//! Brute-force overlap oracle: synthesize the probe, exponentiate the
//! truncated generator on it, and take the inner product, repeating at twice
//! the cutoff to measure convergence.

use num_complex::Complex64;

use super::basis::{dot, Cutoff, FockVec, State, TwoModeFock};
use super::generator::{self, expm_action};
use super::perturbation::{Perturbation, PerturbationKind, Target};
use crate::error::{invalid, Error, Result};
use crate::probes::{mean_photon_number, synthesize_with, ProbeSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Maximum probability on the top two retained levels of the probe.
    pub tail_tol: f64,
    /// Maximum `|kappa(dim) - kappa(2 dim)|`.
    pub convergence_tol: f64,
    /// Largest per-mode cutoff tried for single-mode probes.
    pub max_dim_single: usize,
    /// Largest per-mode cutoff tried for two-mode probes.
    pub max_dim_two_mode: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            tail_tol: 1e-10,
            convergence_tol: 1e-9,
            max_dim_single: 8192,
            max_dim_two_mode: 512,
        }
    }
}

/// Overlap `<psi|U|psi>` at the refined cutoff, with the coarse-vs-refined
/// difference as the convergence diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOverlap {
    pub kappa: Complex64,
    pub coarse: Complex64,
    pub dim: usize,
    pub refined_dim: usize,
    pub convergence_delta: f64,
}

impl OracleOverlap {
    pub fn kappa_sq(&self) -> f64 {
        self.kappa.norm_sqr()
    }
}

/// Apply `exp(G)` for the truncated generator `G` of `p` to `state`.
///
/// Single-mode states accept single-mode perturbations targeting mode A;
/// two-mode states accept any perturbation, single-mode ones acting on their
/// target mode.
pub fn evolve(state: &State, p: &Perturbation) -> Result<State> {
    p.validate()?;
    let dim = state.dim();
    match state {
        State::Single(v) => {
            if p.is_two_mode() {
                return Err(invalid("two-mode perturbation applied to a single-mode probe"));
            }
            if p.target() != Target::ModeA {
                return Err(invalid("single-mode probes are perturbed on mode A"));
            }
            let g = generator::single_mode(p.kind(), dim);
            Ok(State::Single(FockVec::from_amplitudes(expm_action(
                &g,
                v.amps(),
            ))?))
        }
        State::TwoMode(t) => {
            let g = generator::product_space(p, dim);
            Ok(State::TwoMode(TwoModeFock::from_flat(
                dim,
                expm_action(&g, t.flat()),
            )?))
        }
    }
}

fn overlap_at(probe: &ProbeSpec, p: &Perturbation, c: Cutoff, tail_tol: f64) -> Result<Complex64> {
    let psi = synthesize_with(probe, c, tail_tol)?;
    let out = evolve(&psi, p)?;
    Ok(dot(psi.flat(), out.flat()))
}

/// Oracle overlap at cutoff `c`, checked against `2c`, default tolerances.
pub fn brute_force_overlap(probe: &ProbeSpec, p: &Perturbation, c: Cutoff) -> Result<OracleOverlap> {
    brute_force_overlap_with(probe, p, c, &OracleConfig::default())
}

pub fn brute_force_overlap_with(
    probe: &ProbeSpec,
    p: &Perturbation,
    c: Cutoff,
    cfg: &OracleConfig,
) -> Result<OracleOverlap> {
    let coarse = overlap_at(probe, p, c, cfg.tail_tol)?;
    refine(probe, p, c, coarse, cfg)
}

fn refine(
    probe: &ProbeSpec,
    p: &Perturbation,
    c: Cutoff,
    coarse: Complex64,
    cfg: &OracleConfig,
) -> Result<OracleOverlap> {
    let fine_cut = c.doubled();
    let fine = overlap_at(probe, p, fine_cut, cfg.tail_tol)?;
    let delta = (fine - coarse).norm();
    if delta > cfg.convergence_tol {
        return Err(Error::Convergence {
            coarse_dim: c.dim(),
            fine_dim: fine_cut.dim(),
            coarse,
            fine,
            delta,
            tol: cfg.convergence_tol,
        });
    }
    Ok(OracleOverlap {
        kappa: fine,
        coarse,
        dim: c.dim(),
        refined_dim: fine_cut.dim(),
        convergence_delta: delta,
    })
}

/// Squared parameter scale `|lambda|^2` used to size the first cutoff.
pub fn perturbation_scale_sq(p: &Perturbation) -> f64 {
    match p.kind() {
        PerturbationKind::Displacement(a) | PerturbationKind::Squeeze(a) => a.modulus().powi(2),
        PerturbationKind::TwoModePhase(phi) => phi * phi,
    }
}

/// First cutoff of the automatic policy: `max(16, ceil(8 (N + |lambda|^2 + 1)))`.
pub fn initial_cutoff(mean_photons: f64, scale_sq: f64) -> Cutoff {
    let dim = (8.0 * (mean_photons + scale_sq + 1.0)).ceil() as usize;
    Cutoff::new(dim.max(16)).expect("dim >= 16")
}

/// Automatic cutoff: start at [`initial_cutoff`] and double until the probe
/// tail and the overlap convergence delta both meet their tolerances.
pub fn brute_force_overlap_auto(
    probe: &ProbeSpec,
    p: &Perturbation,
    cfg: &OracleConfig,
) -> Result<OracleOverlap> {
    let max_dim = if probe.is_two_mode() {
        cfg.max_dim_two_mode
    } else {
        cfg.max_dim_single
    };
    let mut c = initial_cutoff(mean_photon_number(probe), perturbation_scale_sq(p));
    let mut cached: Option<Complex64> = None;
    let mut last_err = None;
    while c.doubled().dim() <= max_dim {
        let coarse = match cached.take() {
            Some(k) => k,
            None => match overlap_at(probe, p, c, cfg.tail_tol) {
                Ok(k) => k,
                Err(e @ Error::Truncation { .. }) => {
                    last_err = Some(e);
                    c = c.doubled();
                    continue;
                }
                Err(e) => return Err(e),
            },
        };
        match refine(probe, p, c, coarse, cfg) {
            Ok(r) => return Ok(r),
            Err(Error::Convergence { fine, .. }) => {
                cached = Some(fine);
                last_err = None;
                c = c.doubled();
            }
            Err(e @ Error::Truncation { .. }) => {
                last_err = Some(e);
                c = c.doubled();
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| {
        invalid(format!(
            "automatic cutoff exceeded the {max_dim}-level limit without converging"
        ))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::perturbation::Amplitude;

    #[test]
    fn identity_perturbation_gives_unit_overlap() {
        let probe = ProbeSpec::TwinBeam(0.5);
        let r = brute_force_overlap(
            &probe,
            &Perturbation::displacement(Amplitude::real(0.0)),
            Cutoff::new(40).unwrap(),
        )
        .unwrap();
        assert!((r.kappa - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn vacuum_displacement_overlap() {
        let alpha = Amplitude::from_polar(0.8, 1.1);
        let r = brute_force_overlap_auto(
            &ProbeSpec::Vacuum,
            &Perturbation::displacement(alpha),
            &OracleConfig::default(),
        )
        .unwrap();
        assert!((r.kappa.re - (-0.32f64).exp()).abs() < 1e-12);
        assert!(r.kappa.im.abs() < 1e-12);
    }

    #[test]
    fn fixed_cutoff_reports_convergence_failure() {
        // |alpha| = 3 barely fits in 16 levels
        let err = brute_force_overlap(
            &ProbeSpec::Vacuum,
            &Perturbation::displacement(Amplitude::real(3.0)),
            Cutoff::new(16).unwrap(),
        )
        .unwrap_err();
        match err {
            Error::Convergence { coarse_dim, fine_dim, delta, .. } => {
                assert_eq!((coarse_dim, fine_dim), (16, 32));
                assert!(delta > 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn initial_cutoff_policy() {
        assert_eq!(initial_cutoff(0.0, 0.0).dim(), 16);
        assert_eq!(initial_cutoff(10.0, 0.25).dim(), 90);
    }

    #[test]
    fn wrong_mode_combinations_are_rejected() {
        let k = Cutoff::new(8).unwrap();
        let vac = State::Single(FockVec::vacuum(k));
        assert!(evolve(&vac, &Perturbation::two_mode_phase(0.1)).is_err());
        let on_b = Perturbation::displacement(Amplitude::real(0.1))
            .on(Target::ModeB)
            .unwrap();
        assert!(evolve(&vac, &on_b).is_err());
    }
}
