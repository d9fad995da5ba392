//! Probe families and their mean-energy parametrization.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::basis::{check_tail, Cutoff, FockVec, State, TwoModeFock};
use crate::fock::generator::{balanced_mixer, expm_action};
use crate::fock::perturbation::Amplitude;

/// Default tolerance on the probability mass of the top two retained levels.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeSpec {
    Vacuum,
    Coherent(Amplitude),
    /// `S(zeta)|0>`.
    SqueezedVacuum(Amplitude),
    /// `sqrt(1 - x^2) sum_n x^n |n,n>`, `0 <= x < 1`.
    TwinBeam(f64),
    /// Raw single-mode amplitudes, normalized at synthesis.
    CustomSingle(Vec<Complex64>),
    /// Raw two-mode amplitudes, `rows[m][n]` multiplying `|m>|n>`.
    CustomTwoMode(Vec<Vec<Complex64>>),
}

/// Parametric probe families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeKind {
    Vacuum,
    Coherent,
    SqueezedVacuum,
    TwinBeam,
}

impl ProbeSpec {
    pub fn twin_beam(x: f64) -> Result<Self> {
        let p = ProbeSpec::TwinBeam(x);
        p.validate()?;
        Ok(p)
    }

    pub fn coherent(alpha: impl Into<Amplitude>) -> Self {
        ProbeSpec::Coherent(alpha.into())
    }

    pub fn squeezed_vacuum(zeta: impl Into<Amplitude>) -> Self {
        ProbeSpec::SqueezedVacuum(zeta.into())
    }

    pub fn kind(&self) -> Option<ProbeKind> {
        match self {
            ProbeSpec::Vacuum => Some(ProbeKind::Vacuum),
            ProbeSpec::Coherent(_) => Some(ProbeKind::Coherent),
            ProbeSpec::SqueezedVacuum(_) => Some(ProbeKind::SqueezedVacuum),
            ProbeSpec::TwinBeam(_) => Some(ProbeKind::TwinBeam),
            ProbeSpec::CustomSingle(_) | ProbeSpec::CustomTwoMode(_) => None,
        }
    }

    pub fn is_two_mode(&self) -> bool {
        matches!(self, ProbeSpec::TwinBeam(_) | ProbeSpec::CustomTwoMode(_))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ProbeSpec::Vacuum => Ok(()),
            ProbeSpec::Coherent(a) | ProbeSpec::SqueezedVacuum(a) => {
                if a.is_finite() {
                    Ok(())
                } else {
                    Err(invalid("non-finite probe amplitude"))
                }
            }
            ProbeSpec::TwinBeam(x) => {
                if (0.0..1.0).contains(x) {
                    Ok(())
                } else {
                    Err(invalid(format!("twin-beam parameter x = {x} outside [0, 1)")))
                }
            }
            ProbeSpec::CustomSingle(amps) => {
                custom_norm(amps.iter()).map(|_| ())
            }
            ProbeSpec::CustomTwoMode(rows) => {
                let dim = rows.len();
                if rows.iter().any(|r| r.len() != dim) {
                    return Err(invalid("custom two-mode amplitudes must form a square matrix"));
                }
                custom_norm(rows.iter().flatten()).map(|_| ())
            }
        }
    }
}

fn custom_norm<'a>(amps: impl Iterator<Item = &'a Complex64>) -> Result<f64> {
    let mut norm = 0.0;
    for a in amps {
        if !a.re.is_finite() || !a.im.is_finite() {
            return Err(invalid("non-finite custom amplitude"));
        }
        norm += a.norm_sqr();
    }
    if norm == 0.0 {
        return Err(invalid("custom amplitudes are not normalizable"));
    }
    Ok(norm)
}

/// Mean total photon number of the (untruncated) probe.
pub fn mean_photon_number(p: &ProbeSpec) -> f64 {
    match p {
        ProbeSpec::Vacuum => 0.0,
        ProbeSpec::Coherent(a) => a.modulus().powi(2),
        ProbeSpec::SqueezedVacuum(z) => z.modulus().sinh().powi(2),
        ProbeSpec::TwinBeam(x) => 2.0 * x * x / (1.0 - x * x),
        ProbeSpec::CustomSingle(amps) => {
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            amps.iter()
                .enumerate()
                .map(|(n, a)| n as f64 * a.norm_sqr())
                .sum::<f64>()
                / norm
        }
        ProbeSpec::CustomTwoMode(rows) => {
            let mut norm = 0.0;
            let mut total = 0.0;
            for (m, row) in rows.iter().enumerate() {
                for (n, a) in row.iter().enumerate() {
                    norm += a.norm_sqr();
                    total += (m + n) as f64 * a.norm_sqr();
                }
            }
            total / norm
        }
    }
}

/// Inverse of [`mean_photon_number`] within a family; `phase` sets the
/// argument of the coherent amplitude or squeezing parameter.
pub fn param_for_energy(kind: ProbeKind, n: f64, phase: f64) -> Result<ProbeSpec> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(invalid(format!("mean photon number must be finite and >= 0, got {n}")));
    }
    Ok(match kind {
        ProbeKind::Vacuum if n > 0.0 => {
            return Err(invalid("the vacuum carries no photons"));
        }
        ProbeKind::Vacuum => ProbeSpec::Vacuum,
        ProbeKind::Coherent => ProbeSpec::Coherent(Amplitude::from_polar(n.sqrt(), phase)),
        ProbeKind::SqueezedVacuum => {
            ProbeSpec::SqueezedVacuum(Amplitude::from_polar(n.sqrt().asinh(), phase))
        }
        ProbeKind::TwinBeam => ProbeSpec::TwinBeam((n / (n + 2.0)).sqrt()),
    })
}

/// Twin-beam `x` for mean total photon number `n`.
pub fn twin_beam_x(n: f64) -> f64 {
    (n / (n + 2.0)).sqrt()
}

/// Normalized truncated probe; fails when the tail mass exceeds
/// [`DEFAULT_TAIL_TOL`].
pub fn synthesize(p: &ProbeSpec, c: Cutoff) -> Result<State> {
    synthesize_with(p, c, DEFAULT_TAIL_TOL)
}

pub fn synthesize_with(p: &ProbeSpec, c: Cutoff, tail_tol: f64) -> Result<State> {
    let (state, dropped) = build(p, c)?;
    if dropped > tail_tol {
        return Err(Error::Truncation {
            dim: c.dim(),
            tail: dropped,
            tol: tail_tol,
        });
    }
    check_tail(&state, tail_tol)?;
    Ok(state)
}

/// Normalized truncated probe without the tail check.
pub fn synthesize_unchecked(p: &ProbeSpec, c: Cutoff) -> Result<State> {
    build(p, c).map(|(s, _)| s)
}

/// Returns the normalized state and the relative mass of custom amplitudes
/// dropped by the cutoff.
fn build(p: &ProbeSpec, c: Cutoff) -> Result<(State, f64)> {
    p.validate()?;
    let dim = c.dim();
    let zero = Complex64::new(0.0, 0.0);
    let (mut state, dropped) = match p {
        ProbeSpec::Vacuum => (State::Single(FockVec::vacuum(c)), 0.0),
        ProbeSpec::Coherent(alpha) => (State::Single(coherent_amplitudes(*alpha, dim)), 0.0),
        ProbeSpec::SqueezedVacuum(zeta) => {
            (State::Single(squeezed_vacuum_amplitudes(*zeta, dim)), 0.0)
        }
        ProbeSpec::TwinBeam(x) => {
            let norm = (1.0 - x * x).sqrt();
            let t = TwoModeFock::from_fn(c, |m, n| {
                if m == n {
                    Complex64::new(norm * x.powi(n as i32), 0.0)
                } else {
                    zero
                }
            });
            (State::TwoMode(t), 0.0)
        }
        ProbeSpec::CustomSingle(amps) => {
            let total = custom_norm(amps.iter())?;
            let mut kept: Vec<Complex64> = amps.iter().take(dim).copied().collect();
            kept.resize(dim, zero);
            let kept_norm: f64 = kept.iter().map(|a| a.norm_sqr()).sum();
            (
                State::Single(FockVec::from_amplitudes(kept)?),
                1.0 - kept_norm / total,
            )
        }
        ProbeSpec::CustomTwoMode(rows) => {
            let total = custom_norm(rows.iter().flatten())?;
            let t = TwoModeFock::from_fn(c, |m, n| {
                rows.get(m).and_then(|r| r.get(n)).copied().unwrap_or(zero)
            });
            let kept = t.norm_sqr();
            (State::TwoMode(t), 1.0 - kept / total)
        }
    };
    match &mut state {
        State::Single(v) => v.normalize()?,
        State::TwoMode(t) => t.normalize()?,
    }
    Ok((state, dropped.max(0.0)))
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// `exp(-|alpha|^2/2) alpha^n / sqrt(n!)`, magnitudes in log space.
fn coherent_amplitudes(alpha: Amplitude, dim: usize) -> FockVec {
    let r = alpha.modulus();
    let mut amps = Vec::with_capacity(dim);
    let mut ln_fact = 0.0;
    for n in 0..dim {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let amp = if r == 0.0 {
            if n == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            (-0.5 * r * r + n as f64 * r.ln() - 0.5 * ln_fact).exp()
        };
        amps.push(Complex64::from_polar(amp, n as f64 * alpha.arg()));
    }
    FockVec::from_amplitudes(amps).expect("finite amplitudes")
}

/// `S(zeta)|0> = cosh(r)^(-1/2) sum_k sqrt((2k)!)/(2^k k!) (e^(i theta) tanh r)^k |2k>`.
fn squeezed_vacuum_amplitudes(zeta: Amplitude, dim: usize) -> FockVec {
    let r = zeta.modulus();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let ln_pre = -0.5 * r.cosh().ln();
    let ln_tanh = r.tanh().ln();
    for k in 0..dim.div_ceil(2) {
        let idx = 2 * k;
        let ln_mag = if k == 0 {
            ln_pre
        } else if r == 0.0 {
            f64::NEG_INFINITY
        } else {
            ln_pre + 0.5 * ln_factorial(2 * k) - k as f64 * 2f64.ln() - ln_factorial(k)
                + k as f64 * ln_tanh
        };
        amps[idx] = Complex64::from_polar(ln_mag.exp(), k as f64 * zeta.arg());
    }
    FockVec::from_amplitudes(amps).expect("finite amplitudes")
}

/// Eigenstate `|n,d>>` of `a^dagger a - b^dagger b` with eigenvalue `d`:
/// `|n+d>|n>` for `d >= 0`, `|n>|n+|d|>` otherwise.
pub fn number_difference_state(n: usize, d: i64, c: Cutoff) -> Result<TwoModeFock> {
    let shift = d.unsigned_abs() as usize;
    if n + shift >= c.dim() {
        return Err(invalid(format!(
            "|n={n}, d={d}>> needs {} levels, cutoff has {}",
            n + shift + 1,
            c.dim()
        )));
    }
    let (m, k) = if d >= 0 { (n + shift, n) } else { (n, n + shift) };
    let mut t = TwoModeFock::zeros(c);
    t.set(m, k, Complex64::new(1.0, 0.0));
    Ok(t)
}

/// Superposition `sum_j w_j |n, d_j>>` rotated by the balanced mixer
/// `exp[-(pi/4)(a^dagger b - a b^dagger)]`.
///
/// The rotated `|n,d>>` is an eigenvector of the two-mode phase shift with
/// eigenphase `d phi`. Each component must lie in a complete total-number
/// block (`2n + |d| < dim`) so that the truncated mixer acts exactly.
pub fn optimal_phase_probe(
    n: usize,
    d_list: &[i64],
    weights: &[Complex64],
    c: Cutoff,
) -> Result<TwoModeFock> {
    if d_list.is_empty() {
        return Err(invalid("optimal phase probe needs at least one d value"));
    }
    if d_list.len() != weights.len() {
        return Err(invalid(format!(
            "{} d values but {} weights",
            d_list.len(),
            weights.len()
        )));
    }
    custom_norm(weights.iter())?;
    let mut acc = TwoModeFock::zeros(c);
    for (&d, &w) in d_list.iter().zip(weights) {
        let total = 2 * n + d.unsigned_abs() as usize;
        if total >= c.dim() {
            return Err(invalid(format!(
                "d = {d} at n = {n} reaches total photon number {total}, beyond cutoff {}",
                c.dim()
            )));
        }
        let basis = number_difference_state(n, d, c)?;
        for (i, a) in basis.flat().iter().enumerate() {
            if *a != Complex64::new(0.0, 0.0) {
                let (m, k) = (i / c.dim(), i % c.dim());
                acc.set(m, k, acc.get(m, k) + w * a);
            }
        }
    }
    acc.normalize()?;
    let rotated = expm_action(&balanced_mixer(c.dim()), acc.flat());
    TwoModeFock::from_flat(c.dim(), rotated)
}
