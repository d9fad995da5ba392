use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::basis::{Cutoff, FockVec, State, TwoModeFock};
use super::expm::expm;
use super::generator::{self, number_blocks};
use super::perturbation::{Perturbation, Target};
use crate::error::{invalid, Error, Result};

/// Largest product space materialized as a dense matrix (64 levels per mode).
pub const MAX_DENSE_PRODUCT_DIM: usize = 4096;

/// Mass allowed to reach the top two levels from the converged subspace.
pub const DEFAULT_LEAKAGE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    SingleMode,
    TwoMode,
}

/// Dense perturbation unitary in the truncated basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    perturbation: Option<Perturbation>,
    cutoff: Cutoff,
    space: Space,
}

/// Exponentiate the truncated generator of `p`.
///
/// Single-mode families give a `dim x dim` matrix; the two-mode phase shift
/// gives the `dim^2 x dim^2` matrix on the product basis, built block by
/// block since its generator conserves the total photon number.
pub fn build_unitary(p: &Perturbation, c: Cutoff) -> Result<OperatorMatrix> {
    build_unitary_with(p, c, DEFAULT_LEAKAGE_TOL)
}

pub fn build_unitary_with(p: &Perturbation, c: Cutoff, leakage_tol: f64) -> Result<OperatorMatrix> {
    p.validate()?;
    let op = if p.is_two_mode() {
        check_product_dim(c)?;
        let generator = generator::product_space(p, c.dim());
        OperatorMatrix {
            entries: blockwise_exp(&generator, c.dim()),
            perturbation: Some(*p),
            cutoff: c,
            space: Space::TwoMode,
        }
    } else {
        let generator = generator::single_mode(p.kind(), c.dim()).to_dense();
        OperatorMatrix {
            entries: expm(&generator),
            perturbation: Some(*p),
            cutoff: c,
            space: Space::SingleMode,
        }
    };
    op.check_leakage(leakage_tol)?;
    Ok(op)
}

/// The operator on the two-mode product space: `U (x) I`, `I (x) U` or `V`.
pub fn build_two_mode_unitary(p: &Perturbation, c: Cutoff) -> Result<OperatorMatrix> {
    let op = build_unitary(p, c)?;
    op.lift()
}

/// `exp[-(pi/4)(a^dagger b - a b^dagger)]` on the product basis.
pub fn balanced_mixer(c: Cutoff) -> Result<OperatorMatrix> {
    check_product_dim(c)?;
    let generator = generator::balanced_mixer(c.dim());
    Ok(OperatorMatrix {
        entries: blockwise_exp(&generator, c.dim()),
        perturbation: None,
        cutoff: c,
        space: Space::TwoMode,
    })
}

fn check_product_dim(c: Cutoff) -> Result<()> {
    if c.dim() * c.dim() > MAX_DENSE_PRODUCT_DIM {
        return Err(invalid(format!(
            "dense two-mode operator at dim {} exceeds the {MAX_DENSE_PRODUCT_DIM}-state product cap",
            c.dim()
        )));
    }
    Ok(())
}

fn blockwise_exp(generator: &generator::Generator, dim: usize) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(dim * dim, dim * dim);
    for block in number_blocks(dim) {
        let e = expm(&generator.submatrix(&block));
        for (i, &r) in block.iter().enumerate() {
            for (j, &c) in block.iter().enumerate() {
                out[(r, c)] = e[(i, j)];
            }
        }
    }
    out
}

impl OperatorMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn perturbation(&self) -> Option<&Perturbation> {
        self.perturbation.as_ref()
    }

    /// Basis indices of the converged subspace: the first `dim/2` levels of
    /// every mode.
    fn converged_indices(&self) -> Vec<usize> {
        let d = self.cutoff.dim();
        let half = (d / 2).max(1);
        match self.space {
            Space::SingleMode => (0..half).collect(),
            Space::TwoMode => (0..half)
                .flat_map(|m| (0..half).map(move |n| m * d + n))
                .collect(),
        }
    }

    fn is_top_level(&self, row: usize) -> bool {
        let d = self.cutoff.dim();
        match self.space {
            Space::SingleMode => row >= d - 2,
            Space::TwoMode => row / d >= d - 2 || row % d >= d - 2,
        }
    }

    /// `max |(U^dagger U - I)_{ij}|` over the converged subspace.
    pub fn unitarity_defect(&self) -> f64 {
        let idx = self.converged_indices();
        let mut worst: f64 = 0.0;
        for &i in &idx {
            for &j in &idx {
                let g: Complex64 = self.entries.column(i).dotc(&self.entries.column(j));
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    /// Largest probability that a converged-subspace column leaks into the
    /// top two levels.
    pub fn leakage(&self) -> f64 {
        self.converged_indices()
            .into_iter()
            .map(|j| {
                self.entries
                    .column(j)
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| self.is_top_level(*i))
                    .map(|(_, z)| z.norm_sqr())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    fn check_leakage(&self, tol: f64) -> Result<()> {
        let leak = self.leakage();
        if leak > tol {
            return Err(Error::Truncation {
                dim: self.cutoff.dim(),
                tail: leak,
                tol,
            });
        }
        Ok(())
    }

    /// Kronecker-lift a single-mode operator onto the product space according
    /// to its target. Two-mode operators are returned unchanged.
    pub fn lift(&self) -> Result<OperatorMatrix> {
        if self.space == Space::TwoMode {
            return Ok(self.clone());
        }
        let c = self.cutoff;
        check_product_dim(c)?;
        let d = c.dim();
        let target = self.perturbation.map(|p| p.target()).unwrap_or(Target::ModeA);
        let mut out = DMatrix::zeros(d * d, d * d);
        for r in 0..d {
            for col in 0..d {
                let u = self.entries[(r, col)];
                if u == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for s in 0..d {
                    match target {
                        Target::ModeB => out[(s * d + r, s * d + col)] = u,
                        _ => out[(r * d + s, col * d + s)] = u,
                    }
                }
            }
        }
        Ok(OperatorMatrix {
            entries: out,
            perturbation: self.perturbation,
            cutoff: c,
            space: Space::TwoMode,
        })
    }

    pub fn apply(&self, state: &State) -> Result<State> {
        if state.dim() != self.cutoff.dim() {
            return Err(invalid("operator and state have different cutoffs"));
        }
        match (self.space, state) {
            (Space::SingleMode, State::Single(v)) => {
                let out = &self.entries * DVector::from_column_slice(v.amps());
                Ok(State::Single(FockVec::from_amplitudes(out.as_slice().to_vec())?))
            }
            (Space::TwoMode, State::TwoMode(t)) => {
                let out = &self.entries * DVector::from_column_slice(t.flat());
                Ok(State::TwoMode(TwoModeFock::from_flat(
                    t.dim(),
                    out.as_slice().to_vec(),
                )?))
            }
            (Space::SingleMode, State::TwoMode(_)) => self.lift()?.apply(state),
            (Space::TwoMode, State::Single(_)) => {
                Err(invalid("two-mode operator applied to a single-mode state"))
            }
        }
    }
}
