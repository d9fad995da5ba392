//! Reference quantities built without the crate's unitary machinery: unitaries
//! come from eigendecompositions of the Hermitian generators, states from
//! their defining amplitudes.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn annihilation(d: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |i, j| if j == i + 1 { c((j as f64).sqrt()) } else { c(0.0) })
}

/// `exp(i H)` for Hermitian `H`.
pub fn exp_i_hermitian(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let h = (h + h.adjoint()) * c(0.5);
    let eig = h.symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, l)));
    v * phases * v.adjoint()
}

/// `exp(alpha a^dagger - conj(alpha) a)` on `d` levels.
pub fn displacement(alpha: Complex64, d: usize) -> DMatrix<Complex64> {
    let a = annihilation(d);
    let gen = a.adjoint() * alpha - &a * alpha.conj();
    exp_i_hermitian(&(gen * (-I)))
}

/// `exp((zeta a^dagger^2 - conj(zeta) a^2) / 2)` on `d` levels.
pub fn squeeze(zeta: Complex64, d: usize) -> DMatrix<Complex64> {
    let a = annihilation(d);
    let a2 = &a * &a;
    let gen = (a2.adjoint() * zeta - a2 * zeta.conj()) * c(0.5);
    exp_i_hermitian(&(gen * (-I)))
}

/// Twin-beam amplitudes as a `d x d` matrix indexed `(m, n)`.
pub fn twin_beam(x: f64, d: usize) -> DMatrix<Complex64> {
    let norm = (1.0 - x * x).sqrt();
    DMatrix::from_fn(d, d, |m, n| if m == n { c(norm * x.powi(n as i32)) } else { c(0.0) })
}

pub fn x_for_energy(n: f64) -> f64 {
    (n / (n + 2.0)).sqrt()
}

fn overlap_matrix(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    a.iter().zip(b.iter()).map(|(u, v)| u.conj() * v).sum()
}

/// `<<x| U_a |x>>` for a single-mode unitary on mode a.
pub fn twin_beam_single_mode_overlap(x: f64, u: &DMatrix<Complex64>) -> Complex64 {
    let psi = twin_beam(x, u.nrows());
    overlap_matrix(&psi, &(u * &psi))
}

/// `P(a^dagger a - b^dagger b = 0)` after a single-mode unitary on mode a.
pub fn twin_beam_single_mode_p_zero(x: f64, u: &DMatrix<Complex64>) -> f64 {
    let out = u * twin_beam(x, u.nrows());
    (0..out.nrows()).map(|m| out[(m, m)].norm_sqr()).sum()
}

/// Block of `a^dagger b + a b^dagger` on total number `m`, basis `|k, m-k>`.
fn hopping_block(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m + 1, m + 1, |i, j| {
        // <k+1, m-k-1| a^dagger b |k, m-k> = sqrt((k+1)(m-k))
        let (lo, hi) = (i.min(j), i.max(j));
        if hi == lo + 1 {
            ((lo + 1) as f64 * (m - lo) as f64).sqrt()
        } else {
            0.0
        }
    })
}

/// Spectral data of `a^dagger b + a b^dagger` restricted to the twin-beam
/// diagonal: for each `n`, eigenvalues of the total-number-`2n` block and the
/// weights `|<n,n|v_k>|^2`.
pub struct PhaseReference {
    x: f64,
    blocks: Vec<(Vec<f64>, Vec<f64>)>,
}

impl PhaseReference {
    pub fn new(x: f64, n_max: usize) -> Self {
        let blocks = (0..=n_max)
            .map(|n| {
                let eig = hopping_block(2 * n).symmetric_eigen();
                let weights = (0..=2 * n).map(|k| eig.eigenvectors[(n, k)].powi(2)).collect();
                (eig.eigenvalues.iter().copied().collect(), weights)
            })
            .collect();
        PhaseReference { x, blocks }
    }

    /// `<<x| exp(i phi (a^dagger b + a b^dagger)) |x>>` and `P(d = 0)` after it.
    pub fn eval(&self, phi: f64) -> (Complex64, f64) {
        let mut kappa = c(0.0);
        let mut p_zero = 0.0;
        for (n, (vals, weights)) in self.blocks.iter().enumerate() {
            let w = (1.0 - self.x * self.x) * self.x.powi(2 * n as i32);
            let u: Complex64 = vals.iter().zip(weights).map(|(&l, &v)| Complex64::from_polar(v, phi * l)).sum();
            kappa += u * w;
            p_zero += w * u.norm_sqr();
        }
        (kappa, p_zero)
    }
}

pub fn twin_beam_phase(x: f64, phi: f64, n_max: usize) -> (Complex64, f64) {
    PhaseReference::new(x, n_max).eval(phi)
}

/// Levels needed for the twin-beam weights `x^(2n)` to fall below `tol`.
pub fn twin_beam_levels(x: f64, tol: f64) -> usize {
    if x == 0.0 {
        return 1;
    }
    (tol.ln() / (2.0 * x.ln())).ceil() as usize + 1
}

/// Pure-state ROC: `Q_lambda(Q_0)` for overlap `k`, written out directly.
pub fn pure_roc(q0: f64, k: f64) -> f64 {
    if q0 >= k {
        1.0
    } else {
        let s = (q0 * k).sqrt() + ((1.0 - q0) * (1.0 - k)).sqrt();
        s * s
    }
}

/// Scalar bisection for `f(t) = target` with `f` decreasing on `[lo, hi]`.
pub fn bisect(mut f: impl FnMut(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
