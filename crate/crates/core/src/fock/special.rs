//! Special functions behind the closed-form matrix elements.

use crate::error::{Error, Result};

/// `|r|` bound of the alternating squeeze-element series.
pub const SQUEEZE_SERIES_MAX_R: f64 = 2.0;
/// Fock-level bound of the alternating squeeze-element series.
pub const SQUEEZE_SERIES_MAX_N: usize = 200;
/// Absolute error budget of the squeeze-element series.
const SQUEEZE_SERIES_TOL: f64 = 1e-10;

/// Below this argument `I_0` is summed from its power series.
pub const BESSEL_SERIES_LIMIT: f64 = 10.0;

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    t.push(0.0);
    let mut acc = 0.0;
    for k in 1..=n {
        acc += (k as f64).ln();
        t.push(acc);
    }
    t
}

/// Laguerre polynomial `L_n(y)` by the three-term recurrence.
pub fn laguerre(n: usize, y: f64) -> f64 {
    laguerre_scaled(n, y, 1.0)
}

fn laguerre_scaled(n: usize, y: f64, scale: f64) -> f64 {
    let mut prev = scale;
    if n == 0 {
        return prev;
    }
    let mut cur = (1.0 - y) * scale;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 - y) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `<n|D(alpha)|n> = exp(-y/2) L_n(y)` with `y = |alpha|^2`.
///
/// The recurrence runs on pre-scaled values, so large `y` cannot overflow.
pub fn displacement_diag_element(n: usize, y: f64) -> f64 {
    laguerre_scaled(n, y, (-0.5 * y).exp())
}

/// `<n|S(r)|n>` from the finite alternating sum
/// `n!/cosh(r)^(n+1/2) * sum_l (-1)^l sinh(r)^(2l) / (4^l (l!)^2 (n-2l)!)`.
///
/// Terms are formed in log space. The absolute rounding error is bounded by
/// the sum of term magnitudes; when that bound exceeds the budget, or the
/// arguments leave the stability envelope, a precision-loss error is returned
/// instead of a cancelled result.
pub fn squeeze_diag_element(n: usize, r: f64) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite squeeze r = {r}")));
    }
    if r.abs() > SQUEEZE_SERIES_MAX_R || n > SQUEEZE_SERIES_MAX_N {
        return Err(Error::PrecisionLoss(format!(
            "squeeze series outside envelope (n = {n}, r = {r}; limits n <= \
             {SQUEEZE_SERIES_MAX_N}, |r| <= {SQUEEZE_SERIES_MAX_R})"
        )));
    }
    squeeze_diag_series(n, r)
}

/// The squeeze-element series guarded only by its rounding-error bound.
pub(crate) fn squeeze_diag_series(n: usize, r: f64) -> Result<f64> {
    let ln_fact = ln_factorials(n);
    let ln_cosh = r.cosh().ln();
    let sinh_sq = r.sinh().powi(2);
    let base = ln_fact[n] - (n as f64 + 0.5) * ln_cosh;
    if sinh_sq == 0.0 {
        return Ok((base - ln_fact[n]).exp());
    }
    let ln_ratio = sinh_sq.ln() - 4f64.ln();
    let mut sum = 0.0;
    let mut magnitude = 0.0;
    for l in 0..=n / 2 {
        let t = (base + l as f64 * ln_ratio - 2.0 * ln_fact[l] - ln_fact[n - 2 * l]).exp();
        magnitude += t;
        if l % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    let err = 4.0 * f64::EPSILON * magnitude * (n / 2 + 2) as f64;
    if err > SQUEEZE_SERIES_TOL {
        return Err(Error::PrecisionLoss(format!(
            "squeeze series cancellation at n = {n}, r = {r}: error bound {err:e}"
        )));
    }
    Ok(sum)
}

/// Legendre polynomial `P_n(x)`.
pub fn legendre(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `<<n,n|V(phi)|n,n>> = P_n(cos 2 phi)`: the balanced two-mode phase shift is
/// a spin-n/2 rotation by `2 phi` and `|n,n>>` is its zero-projection state.
pub fn phase_diag_element(n: usize, phi: f64) -> f64 {
    legendre(n, (2.0 * phi).cos())
}

/// `exp(-|x|) I_0(x)`.
///
/// Power series below [`BESSEL_SERIES_LIMIT`], Hankel asymptotic expansion
/// (summed to its smallest term) above.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    let x = x.abs();
    if x < BESSEL_SERIES_LIMIT {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            let k = k as f64;
            term *= q / (k * k);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum * (-x).exp()
    } else {
        let mut term: f64 = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            let next = term * (2.0 * kf - 1.0).powi(2) / (8.0 * kf * x);
            if next >= term || next < 1e-17 * sum {
                break;
            }
            term = next;
            sum += term;
        }
        sum / (2.0 * std::f64::consts::PI * x).sqrt()
    }
}

/// Modified Bessel function `I_0(x)`; overflows to infinity past `x ~ 713`.
pub fn bessel_i0(x: f64) -> f64 {
    bessel_i0_scaled(x) * x.abs().exp()
}
