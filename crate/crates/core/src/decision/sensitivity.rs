use serde::Serialize;

use super::roc::{lambda_threshold, SensitivitySpec};
use crate::error::{invalid, Error, Result};
use crate::fock::Family;

/// Relative bisection tolerance on the perturbation parameter.
pub const BISECTION_REL_TOL: f64 = 1e-10;
const MAX_BISECTION_STEPS: usize = 400;

/// Search envelope for `|alpha|^2` on a probe with `n` photons.
pub fn displacement_envelope(n: f64) -> f64 {
    50.0 / (n + 1.0)
}

pub const SQUEEZE_ENVELOPE: f64 = 2.0;
pub const PHASE_ENVELOPE: f64 = std::f64::consts::FRAC_PI_2;

/// Default upper end of the bisection bracket for a perturbation family.
pub fn default_envelope(family: Family, n: f64) -> f64 {
    match family {
        Family::Displacement => displacement_envelope(n),
        Family::Squeeze => SQUEEZE_ENVELOPE,
        Family::TwoModePhase => PHASE_ENVELOPE,
    }
}

/// Root of a non-increasing map reaching a target level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub lambda_min: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// Function value at `lambda_min`.
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityResult {
    pub q0: f64,
    pub gamma_star: f64,
    /// Required overlap deficit: detection needs `|kappa|^2 <= 1 - lambda`.
    #[serde(rename = "lambda")]
    pub big_lambda: f64,
    /// Probe energy, when the caller supplied one.
    pub energy: Option<f64>,
    pub lambda_min: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub kappa_sq_at_min: f64,
}

impl SensitivityResult {
    pub fn with_energy(mut self, n: f64) -> Self {
        self.energy = Some(n);
        self
    }
}

/// Smallest `lambda` in `[0, envelope]` with `f(lambda) <= target`, for `f`
/// non-increasing. Bisection to relative width [`BISECTION_REL_TOL`].
pub fn bisect_crossing<F>(mut f: F, target: f64, envelope: f64) -> Result<Crossing>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(envelope > 0.0) || !envelope.is_finite() {
        return Err(invalid(format!("search envelope {envelope} must be positive")));
    }
    let f0 = f(0.0)?;
    if f0 <= target {
        return Ok(Crossing {
            lambda_min: 0.0,
            bracket: (0.0, 0.0),
            iterations: 0,
            value: f0,
        });
    }
    let f_hi = f(envelope)?;
    if f_hi > target {
        return Err(Error::NoSolution(format!(
            "value {f_hi} at the envelope edge {envelope} stays above the target {target}"
        )));
    }
    bisect_between(f, target, 0.0, envelope, f_hi)
}

/// As [`bisect_crossing`], but the bracket grows from `guess` by doubling
/// (or shrinks by halving) so the envelope edge is evaluated only when needed.
pub fn bracketed_crossing<F>(mut f: F, target: f64, guess: f64, envelope: f64) -> Result<Crossing>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(envelope > 0.0) || !envelope.is_finite() || !(guess > 0.0) {
        return Err(invalid(format!(
            "bracket needs positive guess and envelope (got {guess}, {envelope})"
        )));
    }
    let f0 = f(0.0)?;
    if f0 <= target {
        return Ok(Crossing {
            lambda_min: 0.0,
            bracket: (0.0, 0.0),
            iterations: 0,
            value: f0,
        });
    }
    let mut hi = guess.min(envelope);
    let mut f_hi = f(hi)?;
    let mut lo = 0.0;
    if f_hi > target {
        loop {
            if hi >= envelope {
                return Err(Error::NoSolution(format!(
                    "value {f_hi} at the envelope edge {envelope} stays above the target {target}"
                )));
            }
            lo = hi;
            hi = (2.0 * hi).min(envelope);
            f_hi = f(hi)?;
            if f_hi <= target {
                break;
            }
        }
    } else {
        loop {
            let mid = 0.5 * hi;
            if mid < f64::MIN_POSITIVE {
                break;
            }
            let v = f(mid)?;
            if v > target {
                lo = mid;
                break;
            }
            hi = mid;
            f_hi = v;
        }
    }
    bisect_between(f, target, lo, hi, f_hi)
}

fn bisect_between<F>(mut f: F, target: f64, mut lo: f64, mut hi: f64, f_hi: f64) -> Result<Crossing>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut value = f_hi;
    let mut iterations = 0;
    while hi - lo > BISECTION_REL_TOL * hi && iterations < MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let v = f(mid)?;
        if v > target {
            lo = mid;
        } else {
            hi = mid;
            value = v;
        }
        iterations += 1;
    }
    Ok(Crossing {
        lambda_min: hi,
        bracket: (lo, hi),
        iterations,
        value,
    })
}

/// Minimum detectable perturbation: the smallest `lambda` with
/// `|kappa(lambda)|^2 <= 1 - Lambda(q0, gamma*)`.
pub fn min_detectable<F>(overlap_fn: F, spec: &SensitivitySpec, envelope: f64) -> Result<SensitivityResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let big = lambda_threshold(spec);
    let mut r = min_detectable_for_lambda(overlap_fn, big, envelope)?;
    r.q0 = spec.q0();
    r.gamma_star = spec.gamma_star();
    Ok(r)
}

/// As [`min_detectable`] with the deficit `Lambda` given directly; `q0` and
/// `gamma_star` are reported as NaN.
pub fn min_detectable_for_lambda<F>(overlap_fn: F, big_lambda: f64, envelope: f64) -> Result<SensitivityResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(0.0..1.0).contains(&big_lambda) {
        return Err(Error::NoSolution(format!(
            "overlap deficit {big_lambda} outside [0, 1)"
        )));
    }
    let c = bisect_crossing(overlap_fn, 1.0 - big_lambda, envelope)?;
    Ok(SensitivityResult {
        q0: f64::NAN,
        gamma_star: f64::NAN,
        big_lambda,
        energy: None,
        lambda_min: c.lambda_min,
        bracket: c.bracket,
        iterations: c.iterations,
        kappa_sq_at_min: c.value,
    })
}

/// As [`min_detectable_for_lambda`], growing the bracket from `guess` instead
/// of starting at the envelope edge.
pub fn min_detectable_from_guess<F>(
    overlap_fn: F,
    big_lambda: f64,
    guess: f64,
    envelope: f64,
) -> Result<SensitivityResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(0.0..1.0).contains(&big_lambda) {
        return Err(Error::NoSolution(format!(
            "overlap deficit {big_lambda} outside [0, 1)"
        )));
    }
    let c = bracketed_crossing(overlap_fn, 1.0 - big_lambda, guess, envelope)?;
    Ok(SensitivityResult {
        q0: f64::NAN,
        gamma_star: f64::NAN,
        big_lambda,
        energy: None,
        lambda_min: c.lambda_min,
        bracket: c.bracket,
        iterations: c.iterations,
        kappa_sq_at_min: c.value,
    })
}

/// Starting bracket for a family: `Lambda/(N+1)` for `|alpha|^2`,
/// `sqrt(Lambda)/(N+1)` for `r` and `phi`.
pub fn initial_guess(family: Family, n: f64, big_lambda: f64) -> f64 {
    let g = match family {
        Family::Displacement => big_lambda / (n + 1.0),
        Family::Squeeze | Family::TwoModePhase => big_lambda.sqrt() / (n + 1.0),
    };
    g.max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_deficit_gives_zero() {
        let spec = SensitivitySpec::new(0.2, 1.0).unwrap();
        let r = min_detectable(|l: f64| Ok((-l).exp()), &spec, 10.0).unwrap();
        assert_eq!(r.lambda_min, 0.0);
    }

    #[test]
    fn exponential_overlap_inverts_to_log() {
        let big = 0.01;
        let n = 3.0;
        let r = min_detectable_for_lambda(|a| Ok((-a * (n + 1.0)).exp()), big, displacement_envelope(n)).unwrap();
        let want = -(1.0f64 - big).ln() / (n + 1.0);
        assert!((r.lambda_min - want).abs() <= 2e-10 * want);
        assert!(r.kappa_sq_at_min <= 1.0 - big);
    }

    #[test]
    fn bracket_grows_and_shrinks() {
        let f = |l: f64| Ok(1.0 / (1.0 + l));
        let want = 1.0 / 0.9 - 1.0;
        for guess in [1e-6, 0.1, 5.0] {
            let c = bracketed_crossing(f, 0.9, guess, 10.0).unwrap();
            assert!((c.lambda_min - want).abs() <= 2e-10 * want, "{guess}: {c:?}");
        }
        assert!(bracketed_crossing(f, 0.01, 1.0, 10.0).is_err());
    }

    #[test]
    fn unreachable_target_is_no_solution() {
        let r = min_detectable_for_lambda(|_| Ok(1.0), 0.1, 1.0);
        assert!(matches!(r, Err(Error::NoSolution(_))));
    }

    #[test]
    fn errors_from_overlap_propagate() {
        let r = min_detectable_for_lambda(|l| if l > 0.5 { Err(invalid("boom")) } else { Ok(1.0 - l) }, 0.1, 1.0);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }
}
