use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Complex parameter kept in both polar and Cartesian form.
///
/// Phase sweeps vary `arg` at fixed modulus; storing both avoids repeated
/// `atan2`/`sin_cos` round trips and keeps `modulus` exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    modulus: f64,
    arg: f64,
    value: Complex64,
}

impl Amplitude {
    pub fn from_polar(modulus: f64, arg: f64) -> Self {
        // a negative modulus is folded into the phase
        let (modulus, arg) = if modulus < 0.0 {
            (-modulus, arg + std::f64::consts::PI)
        } else {
            (modulus, arg)
        };
        Amplitude {
            modulus,
            arg,
            value: Complex64::from_polar(modulus, arg),
        }
    }

    pub fn real(x: f64) -> Self {
        Self::from_polar(x, 0.0)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Amplitude {
            modulus: z.norm(),
            arg: z.arg(),
            value: z,
        }
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn arg(&self) -> f64 {
        self.arg
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn is_finite(&self) -> bool {
        self.modulus.is_finite() && self.arg.is_finite()
    }
}

impl From<f64> for Amplitude {
    fn from(x: f64) -> Self {
        Amplitude::real(x)
    }
}

impl From<Complex64> for Amplitude {
    fn from(z: Complex64) -> Self {
        Amplitude::from_complex(z)
    }
}

/// Which mode(s) a perturbation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    #[serde(alias = "a")]
    ModeA,
    #[serde(alias = "b")]
    ModeB,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerturbationKind {
    /// `D(alpha) = exp(alpha a^dagger - conj(alpha) a)`.
    Displacement(Amplitude),
    /// `S(zeta) = exp[(zeta a^dagger^2 - conj(zeta) a^2) / 2]`.
    Squeeze(Amplitude),
    /// `V(phi) = exp[i phi (a^dagger b + a b^dagger)]`.
    TwoModePhase(f64),
}

/// Perturbation families, without parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Displacement,
    Squeeze,
    #[serde(alias = "phase")]
    TwoModePhase,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    kind: PerturbationKind,
    target: Target,
}

impl Perturbation {
    /// Single-mode displacement acting on mode A.
    pub fn displacement(alpha: impl Into<Amplitude>) -> Self {
        Perturbation {
            kind: PerturbationKind::Displacement(alpha.into()),
            target: Target::ModeA,
        }
    }

    /// Single-mode squeezing acting on mode A.
    pub fn squeeze(zeta: impl Into<Amplitude>) -> Self {
        Perturbation {
            kind: PerturbationKind::Squeeze(zeta.into()),
            target: Target::ModeA,
        }
    }

    pub fn two_mode_phase(phi: f64) -> Self {
        Perturbation {
            kind: PerturbationKind::TwoModePhase(phi),
            target: Target::Both,
        }
    }

    /// Build a family member from a real magnitude and a phase (ignored for
    /// the two-mode phase shift).
    pub fn of_family(family: Family, magnitude: f64, phase: f64) -> Self {
        match family {
            Family::Displacement => Self::displacement(Amplitude::from_polar(magnitude, phase)),
            Family::Squeeze => Self::squeeze(Amplitude::from_polar(magnitude, phase)),
            Family::TwoModePhase => Self::two_mode_phase(magnitude),
        }
    }

    /// Family member at sensitivity parameter `lambda`: `|alpha|^2` for the
    /// displacement, `r` for the squeeze, `phi` for the phase shift.
    pub fn at_lambda(family: Family, lambda: f64, phase: f64) -> Self {
        match family {
            Family::Displacement => Self::of_family(family, lambda.max(0.0).sqrt(), phase),
            _ => Self::of_family(family, lambda, phase),
        }
    }

    /// Retarget a single-mode perturbation. Two-mode phase shifts always act
    /// on both modes.
    pub fn on(self, target: Target) -> Result<Self> {
        match (self.kind, target) {
            (PerturbationKind::TwoModePhase(_), Target::Both) => Ok(self),
            (PerturbationKind::TwoModePhase(_), _) => {
                Err(invalid("a two-mode phase shift acts on both modes"))
            }
            (_, Target::Both) => Err(invalid(
                "single-mode perturbations target mode A or mode B",
            )),
            _ => Ok(Perturbation { target, ..self }),
        }
    }

    pub fn kind(&self) -> PerturbationKind {
        self.kind
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn family(&self) -> Family {
        match self.kind {
            PerturbationKind::Displacement(_) => Family::Displacement,
            PerturbationKind::Squeeze(_) => Family::Squeeze,
            PerturbationKind::TwoModePhase(_) => Family::TwoModePhase,
        }
    }

    pub fn is_two_mode(&self) -> bool {
        matches!(self.kind, PerturbationKind::TwoModePhase(_))
    }

    /// `|alpha|`, `|zeta|` or `|phi|`.
    pub fn magnitude(&self) -> f64 {
        match self.kind {
            PerturbationKind::Displacement(a) | PerturbationKind::Squeeze(a) => a.modulus(),
            PerturbationKind::TwoModePhase(phi) => phi.abs(),
        }
    }

    /// Inverse of [`Self::at_lambda`].
    pub fn lambda(&self) -> f64 {
        match self.kind {
            PerturbationKind::Displacement(a) => a.modulus().powi(2),
            _ => self.magnitude(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.magnitude() == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let finite = match self.kind {
            PerturbationKind::Displacement(a) | PerturbationKind::Squeeze(a) => a.is_finite(),
            PerturbationKind::TwoModePhase(phi) => phi.is_finite(),
        };
        if finite {
            Ok(())
        } else {
            Err(invalid(format!("non-finite perturbation parameter {self:?}")))
        }
    }
}
