//! Truncated anti-Hermitian generators in sparse form and the action of their
//! exponential on a state.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::perturbation::{Perturbation, PerturbationKind, Target};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Sparse square matrix in compressed-row form.
#[derive(Debug, Clone)]
pub(crate) struct Generator {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
    norm1: f64,
}

impl Generator {
    pub(crate) fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Self {
        triplets.retain(|t| t.2 != ZERO);
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut indptr = vec![0; dim + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        let mut col_sums = vec![0.0; dim];
        for &(r, c, v) in &triplets {
            indptr[r + 1] += 1;
            indices.push(c);
            values.push(v);
            col_sums[c] += v.norm();
        }
        for r in 0..dim {
            indptr[r + 1] += indptr[r];
        }
        let norm1 = col_sums.into_iter().fold(0.0, f64::max);
        Generator {
            dim,
            indptr,
            indices,
            values,
            norm1,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    /// Maximum absolute column sum.
    pub(crate) fn norm1(&self) -> f64 {
        self.norm1
    }

    pub(crate) fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        for (r, o) in out.iter_mut().enumerate().take(self.dim) {
            let mut acc = ZERO;
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[k] * v[self.indices[k]];
            }
            *o = acc;
        }
    }

    pub(crate) fn get(&self, r: usize, c: usize) -> Complex64 {
        let row = self.indptr[r]..self.indptr[r + 1];
        match self.indices[row.clone()].binary_search(&c) {
            Ok(k) => self.values[row.start + k],
            Err(_) => ZERO,
        }
    }

    pub(crate) fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for k in self.indptr[r]..self.indptr[r + 1] {
                m[(r, self.indices[k])] = self.values[k];
            }
        }
        m
    }

    /// Dense submatrix on the given (sorted or not) index set.
    pub(crate) fn submatrix(&self, idx: &[usize]) -> DMatrix<Complex64> {
        let k = idx.len();
        DMatrix::from_fn(k, k, |i, j| self.get(idx[i], idx[j]))
    }
}

/// Single-mode generator entries `(row, col, value)` on levels `0..dim`.
pub(crate) fn single_mode_entries(kind: PerturbationKind, dim: usize) -> Vec<(usize, usize, Complex64)> {
    let mut t = Vec::new();
    match kind {
        PerturbationKind::Displacement(alpha) => {
            let a = alpha.value();
            for n in 0..dim - 1 {
                let s = ((n + 1) as f64).sqrt();
                // alpha a^dagger |n> and -conj(alpha) a |n+1>
                t.push((n + 1, n, a * s));
                t.push((n, n + 1, -a.conj() * s));
            }
        }
        PerturbationKind::Squeeze(zeta) => {
            let z = zeta.value();
            for n in 0..dim.saturating_sub(2) {
                let s = (((n + 1) * (n + 2)) as f64).sqrt();
                t.push((n + 2, n, 0.5 * z * s));
                t.push((n, n + 2, -0.5 * z.conj() * s));
            }
        }
        PerturbationKind::TwoModePhase(_) => {
            panic!("two-mode phase shift has no single-mode generator")
        }
    }
    t
}

pub(crate) fn single_mode(kind: PerturbationKind, dim: usize) -> Generator {
    Generator::from_triplets(dim, single_mode_entries(kind, dim))
}

/// Generator on the `dim * dim` product space, row-major index `m * dim + n`.
pub(crate) fn product_space(p: &Perturbation, dim: usize) -> Generator {
    match p.kind() {
        PerturbationKind::TwoModePhase(phi) => {
            hopping(dim, Complex64::new(0.0, phi), Complex64::new(0.0, phi))
        }
        kind => {
            let single = single_mode_entries(kind, dim);
            let mut t = Vec::with_capacity(single.len() * dim);
            for &(r, c, v) in &single {
                for spectator in 0..dim {
                    match p.target() {
                        Target::ModeB => t.push((spectator * dim + r, spectator * dim + c, v)),
                        _ => t.push((r * dim + spectator, c * dim + spectator, v)),
                    }
                }
            }
            Generator::from_triplets(dim * dim, t)
        }
    }
}

/// `up * a^dagger b + down * a b^dagger` on the product space.
pub(crate) fn hopping(dim: usize, up: Complex64, down: Complex64) -> Generator {
    let mut t = Vec::new();
    for m in 0..dim {
        for n in 0..dim {
            let col = m * dim + n;
            if m + 1 < dim && n >= 1 {
                let s = (((m + 1) * n) as f64).sqrt();
                t.push(((m + 1) * dim + (n - 1), col, up * s));
            }
            if m >= 1 && n + 1 < dim {
                let s = ((m * (n + 1)) as f64).sqrt();
                t.push(((m - 1) * dim + (n + 1), col, down * s));
            }
        }
    }
    Generator::from_triplets(dim * dim, t)
}

/// Generator of the balanced mixer `exp[-(pi/4)(a^dagger b - a b^dagger)]`.
pub(crate) fn balanced_mixer(dim: usize) -> Generator {
    let q = std::f64::consts::FRAC_PI_4;
    hopping(dim, Complex64::new(-q, 0.0), Complex64::new(q, 0.0))
}

/// Product-space indices grouped by total photon number `m + n`.
pub(crate) fn number_blocks(dim: usize) -> Vec<Vec<usize>> {
    (0..2 * dim - 1)
        .map(|total| {
            (0..dim)
                .filter(|&m| total >= m && total - m < dim)
                .map(|m| m * dim + (total - m))
                .collect()
        })
        .collect()
}

/// `exp(G) v` by a truncated Taylor series applied in steps of norm at most one.
pub(crate) fn expm_action(generator: &Generator, v: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(v.len(), generator.dim());
    let norm = generator.norm1();
    if norm == 0.0 {
        return v.to_vec();
    }
    let steps = norm.ceil().max(1.0) as usize;
    let h = 1.0 / steps as f64;
    let mut w = v.to_vec();
    let mut term = vec![ZERO; v.len()];
    let mut next = vec![ZERO; v.len()];
    for _ in 0..steps {
        term.copy_from_slice(&w);
        let mut small = 0;
        for k in 1..=60 {
            generator.apply(&term, &mut next);
            let f = h / k as f64;
            let mut term_norm = 0.0;
            let mut acc_norm = 0.0;
            for i in 0..w.len() {
                term[i] = next[i] * f;
                w[i] += term[i];
                term_norm += term[i].norm_sqr();
                acc_norm += w[i].norm_sqr();
            }
            // two consecutive negligible terms: the factorial tail is below rounding
            if term_norm <= 1e-36 * acc_norm {
                small += 1;
                if small == 2 {
                    break;
                }
            } else {
                small = 0;
            }
        }
    }
    w
}
