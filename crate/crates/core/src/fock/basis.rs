use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Number of retained Fock levels per mode; the basis is `0..dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cutoff(usize);

impl Cutoff {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(invalid(format!("cutoff dim must be at least 2, got {dim}")));
        }
        Ok(Cutoff(dim))
    }

    pub fn dim(self) -> usize {
        self.0
    }

    pub fn doubled(self) -> Cutoff {
        Cutoff(self.0 * 2)
    }
}

/// Single-mode pure state over number states `0..dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVec {
    amps: Vec<Complex64>,
}

impl FockVec {
    /// Wraps raw amplitudes without normalizing.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(invalid("a Fock vector needs at least two levels"));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(invalid("non-finite amplitude"));
        }
        Ok(FockVec { amps })
    }

    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let mut v = Self::from_amplitudes(amps)?;
        v.normalize()?;
        Ok(v)
    }

    pub fn number(n: usize, cutoff: Cutoff) -> Result<Self> {
        if n >= cutoff.dim() {
            return Err(invalid(format!(
                "number state |{n}> outside cutoff {}",
                cutoff.dim()
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); cutoff.dim()];
        amps[n] = Complex64::new(1.0, 0.0);
        Ok(FockVec { amps })
    }

    pub fn vacuum(cutoff: Cutoff) -> Self {
        Self::number(0, cutoff).expect("dim >= 2")
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(invalid("state is not normalizable"));
        }
        for a in &mut self.amps {
            *a /= norm;
        }
        Ok(())
    }

    /// Probability on the top two retained levels.
    pub fn tail_mass(&self) -> f64 {
        let d = self.dim();
        self.amps[d - 2].norm_sqr() + self.amps[d - 1].norm_sqr()
    }

    /// `<a^dagger a>`.
    pub fn mean_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }

    /// Copy into a different cutoff, zero-padding or dropping the top levels.
    pub fn resized(&self, cutoff: Cutoff) -> FockVec {
        let mut amps = self.amps.clone();
        amps.resize(cutoff.dim(), Complex64::new(0.0, 0.0));
        FockVec { amps }
    }
}

/// Two-mode pure state; entry `(m, n)` is the coefficient of `|m>|n>`.
///
/// Stored row-major so that `m * dim + n` indexes the product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFock {
    dim: usize,
    amps: Vec<Complex64>,
}

impl TwoModeFock {
    pub fn zeros(cutoff: Cutoff) -> Self {
        let dim = cutoff.dim();
        TwoModeFock {
            dim,
            amps: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn from_fn(cutoff: Cutoff, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let dim = cutoff.dim();
        let mut amps = Vec::with_capacity(dim * dim);
        for m in 0..dim {
            for n in 0..dim {
                amps.push(f(m, n));
            }
        }
        TwoModeFock { dim, amps }
    }

    /// Row-major flat amplitudes of length `dim * dim`.
    pub fn from_flat(dim: usize, amps: Vec<Complex64>) -> Result<Self> {
        if dim < 2 || amps.len() != dim * dim {
            return Err(invalid(format!(
                "two-mode amplitudes of length {} do not form a {dim}x{dim} matrix",
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(invalid("non-finite amplitude"));
        }
        Ok(TwoModeFock { dim, amps })
    }

    pub fn product(a: &FockVec, b: &FockVec) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(invalid("product of states with different cutoffs"));
        }
        let dim = a.dim();
        let cutoff = Cutoff(dim);
        Ok(Self::from_fn(cutoff, |m, n| a.amps[m] * b.amps[n]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> Cutoff {
        Cutoff(self.dim)
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.amps[m * self.dim + n]
    }

    pub fn set(&mut self, m: usize, n: usize, value: Complex64) {
        self.amps[m * self.dim + n] = value;
    }

    pub fn flat(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(invalid("state is not normalizable"));
        }
        for a in &mut self.amps {
            *a /= norm;
        }
        Ok(())
    }

    /// Larger of the two marginal masses on the top two levels of each mode.
    pub fn tail_mass(&self) -> f64 {
        let d = self.dim;
        let mut row_tail = 0.0;
        let mut col_tail = 0.0;
        for m in 0..d {
            for n in 0..d {
                let p = self.get(m, n).norm_sqr();
                if m >= d - 2 {
                    row_tail += p;
                }
                if n >= d - 2 {
                    col_tail += p;
                }
            }
        }
        f64::max(row_tail, col_tail)
    }

    /// `(<a^dagger a>, <b^dagger b>)`.
    pub fn mean_numbers(&self) -> (f64, f64) {
        let mut na = 0.0;
        let mut nb = 0.0;
        for m in 0..self.dim {
            for n in 0..self.dim {
                let p = self.get(m, n).norm_sqr();
                na += m as f64 * p;
                nb += n as f64 * p;
            }
        }
        (na, nb)
    }

    pub fn mean_total_number(&self) -> f64 {
        let (na, nb) = self.mean_numbers();
        na + nb
    }

    /// Variance of the photon-number difference `a^dagger a - b^dagger b`.
    pub fn difference_variance(&self) -> f64 {
        let mut mean = 0.0;
        let mut second = 0.0;
        for m in 0..self.dim {
            for n in 0..self.dim {
                let p = self.get(m, n).norm_sqr();
                let d = m as f64 - n as f64;
                mean += d * p;
                second += d * d * p;
            }
        }
        second - mean * mean
    }

    /// Probability of a zero photon-number difference: the mass on the diagonal.
    pub fn zero_difference_mass(&self) -> f64 {
        (0..self.dim).map(|n| self.get(n, n).norm_sqr()).sum()
    }

    pub fn resized(&self, cutoff: Cutoff) -> TwoModeFock {
        let keep = self.dim.min(cutoff.dim());
        let mut out = TwoModeFock::zeros(cutoff);
        for m in 0..keep {
            for n in 0..keep {
                out.set(m, n, self.get(m, n));
            }
        }
        out
    }
}

/// A single- or two-mode pure state.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Single(FockVec),
    TwoMode(TwoModeFock),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Single(v) => v.dim(),
            State::TwoMode(t) => t.dim(),
        }
    }

    pub fn cutoff(&self) -> Cutoff {
        Cutoff(self.dim())
    }

    pub fn flat(&self) -> &[Complex64] {
        match self {
            State::Single(v) => v.amps(),
            State::TwoMode(t) => t.flat(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        match self {
            State::Single(v) => v.norm_sqr(),
            State::TwoMode(t) => t.norm_sqr(),
        }
    }

    pub fn tail_mass(&self) -> f64 {
        tail_mass(self)
    }

    pub fn mean_total_number(&self) -> f64 {
        match self {
            State::Single(v) => v.mean_number(),
            State::TwoMode(t) => t.mean_total_number(),
        }
    }

    pub fn is_two_mode(&self) -> bool {
        matches!(self, State::TwoMode(_))
    }

    pub fn as_single(&self) -> Option<&FockVec> {
        match self {
            State::Single(v) => Some(v),
            State::TwoMode(_) => None,
        }
    }

    pub fn as_two_mode(&self) -> Option<&TwoModeFock> {
        match self {
            State::TwoMode(t) => Some(t),
            State::Single(_) => None,
        }
    }

    pub fn resized(&self, cutoff: Cutoff) -> State {
        match self {
            State::Single(v) => State::Single(v.resized(cutoff)),
            State::TwoMode(t) => State::TwoMode(t.resized(cutoff)),
        }
    }
}

impl From<FockVec> for State {
    fn from(v: FockVec) -> Self {
        State::Single(v)
    }
}

impl From<TwoModeFock> for State {
    fn from(t: TwoModeFock) -> Self {
        State::TwoMode(t)
    }
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner_product(a: &State, b: &State) -> Result<Complex64> {
    if a.is_two_mode() != b.is_two_mode() {
        return Err(invalid("inner product between single- and two-mode states"));
    }
    if a.dim() != b.dim() {
        return Err(invalid(format!(
            "inner product across cutoffs {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(dot(a.flat(), b.flat()))
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Probability mass on the top two retained levels (max over modes).
pub fn tail_mass(state: &State) -> f64 {
    match state {
        State::Single(v) => v.tail_mass(),
        State::TwoMode(t) => t.tail_mass(),
    }
}

pub(crate) fn check_tail(state: &State, tol: f64) -> Result<()> {
    let tail = state.tail_mass();
    if tail > tol {
        return Err(Error::Truncation {
            dim: state.dim(),
            tail,
            tol,
        });
    }
    Ok(())
}
