//! Neyman-Pearson strategy for general density matrices: the projector onto
//! the positive eigenspace of `rho_l - mu rho_0`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::roc::RocPoint;
use crate::error::{invalid, Result};

/// Eigenvalues within this distance of zero are left out of the projector.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-12;
/// Tolerance on hermiticity, trace and positivity of input density matrices.
pub const DENSITY_TOL: f64 = 1e-10;

pub const DEFAULT_MU_MIN: f64 = 1e-4;
pub const DEFAULT_MU_MAX: f64 = 1e4;
pub const DEFAULT_MU_POINTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HelstromResult {
    pub mu: f64,
    pub q0: f64,
    pub q_det: f64,
    pub projector_rank: usize,
}

impl HelstromResult {
    pub fn roc_point(&self) -> RocPoint {
        RocPoint {
            q0: self.q0,
            q_det: self.q_det,
        }
    }
}

/// `|psi><psi|` for a normalized amplitude vector.
pub fn pure_density(psi: &[Complex64]) -> DMatrix<Complex64> {
    let n = psi.len();
    DMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj())
}

/// Check that `rho` is Hermitian, unit-trace and positive semidefinite.
pub fn validate_density(rho: &DMatrix<Complex64>) -> Result<()> {
    if !rho.is_square() || rho.nrows() == 0 {
        return Err(invalid("density matrix must be square and non-empty"));
    }
    let n = rho.nrows();
    let mut asym: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            asym = asym.max((rho[(i, j)] - rho[(j, i)].conj()).norm());
        }
    }
    if asym > DENSITY_TOL {
        return Err(invalid(format!("density matrix not Hermitian (defect {asym:e})")));
    }
    let tr = rho.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
        return Err(invalid(format!("density matrix trace {tr} differs from 1")));
    }
    let min_eig = rho.clone().symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig < -DENSITY_TOL {
        return Err(invalid(format!("density matrix has negative eigenvalue {min_eig:e}")));
    }
    Ok(())
}

/// Projector onto the eigenvectors of the Hermitian `op` with eigenvalue
/// above `zero_tol`, and its rank.
pub fn positive_projector(op: &DMatrix<Complex64>, zero_tol: f64) -> (DMatrix<Complex64>, usize) {
    let n = op.nrows();
    let eig = op.clone().symmetric_eigen();
    let mut proj = DMatrix::zeros(n, n);
    let mut rank = 0;
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > zero_tol {
            let v = eig.eigenvectors.column(k);
            proj += v * v.adjoint();
            rank += 1;
        }
    }
    (proj, rank)
}

/// Optimal Neyman-Pearson detection at Lagrange multiplier `mu`.
pub fn helstrom_np(rho0: &DMatrix<Complex64>, rho_l: &DMatrix<Complex64>, mu: f64) -> Result<HelstromResult> {
    helstrom_np_with(rho0, rho_l, mu, ZERO_EIGENVALUE_TOL)
}

pub fn helstrom_np_with(
    rho0: &DMatrix<Complex64>,
    rho_l: &DMatrix<Complex64>,
    mu: f64,
    zero_tol: f64,
) -> Result<HelstromResult> {
    check_pair(rho0, rho_l)?;
    check_mu(mu)?;
    Ok(evaluate(rho0, rho_l, mu, zero_tol))
}

fn check_pair(rho0: &DMatrix<Complex64>, rho_l: &DMatrix<Complex64>) -> Result<()> {
    if rho0.shape() != rho_l.shape() {
        return Err(invalid(format!(
            "density matrices differ in shape: {:?} vs {:?}",
            rho0.shape(),
            rho_l.shape()
        )));
    }
    validate_density(rho0)?;
    validate_density(rho_l)
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(invalid(format!("Lagrange multiplier {mu} must be finite and >= 0")));
    }
    Ok(())
}

fn evaluate(rho0: &DMatrix<Complex64>, rho_l: &DMatrix<Complex64>, mu: f64, zero_tol: f64) -> HelstromResult {
    let op = rho_l - rho0 * Complex64::new(mu, 0.0);
    let eig = op.symmetric_eigen();
    let (mut q0, mut q_det, mut rank) = (0.0, 0.0, 0);
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > zero_tol {
            let v = eig.eigenvectors.column(k);
            q0 += (v.adjoint() * rho0 * v)[(0, 0)].re;
            q_det += (v.adjoint() * rho_l * v)[(0, 0)].re;
            rank += 1;
        }
    }
    HelstromResult {
        mu,
        q0: q0.clamp(0.0, 1.0),
        q_det: q_det.clamp(0.0, 1.0),
        projector_rank: rank,
    }
}

/// Logarithmic grid of `points` values on `[min, max]`.
pub fn log_mu_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0) || !(max > min) || points < 2 {
        return Err(invalid(format!(
            "mu grid needs 0 < min < max and >= 2 points (got {min}, {max}, {points})"
        )));
    }
    let (a, b) = (min.ln(), max.ln());
    let step = (b - a) / (points - 1) as f64;
    Ok((0..points).map(|k| (a + step * k as f64).exp()).collect())
}

pub fn default_mu_grid() -> Vec<f64> {
    log_mu_grid(DEFAULT_MU_MIN, DEFAULT_MU_MAX, DEFAULT_MU_POINTS).expect("valid default grid")
}

/// ROC traced by sweeping `mu`; inputs are validated once.
pub fn helstrom_roc(
    rho0: &DMatrix<Complex64>,
    rho_l: &DMatrix<Complex64>,
    mus: &[f64],
) -> Result<Vec<HelstromResult>> {
    check_pair(rho0, rho_l)?;
    mus.iter()
        .map(|&mu| {
            check_mu(mu)?;
            Ok(evaluate(rho0, rho_l, mu, ZERO_EIGENVALUE_TOL))
        })
        .collect()
}
