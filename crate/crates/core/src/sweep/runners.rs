use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{ConfigError, CutoffPolicy, DecisionSection, ExperimentConfig, OverlapSource};
use super::fit::fit_loglog;
use super::table::{Table, Value};
use crate::decision::helstrom::{helstrom_roc, log_mu_grid, pure_density};
use crate::decision::sensitivity::{default_envelope, initial_guess, min_detectable_from_guess};
use crate::decision::{detection_probability, lambda_threshold, SensitivitySpec};
use crate::error::{invalid, Error, Result};
use crate::fock::basis::dot;
use crate::fock::{
    brute_force_overlap_auto, brute_force_overlap_with, evolve, initial_cutoff, perturbation_scale_sq, Cutoff,
    OracleConfig, OracleOverlap, Perturbation, State,
};
use crate::overlap::{closed_form, DISCREPANCY_TOL};
use crate::photocurrent::{
    closed_form_p_zero, min_detectable_photocurrent, p_zero_diagonal, p_zero_difference_auto, p_zero_difference_with,
};
use crate::probes::{param_for_energy, synthesize_with, twin_beam_x, ProbeKind, ProbeSpec};

/// State dimension above which the ROC is traced in the span of the two
/// pure states instead of the full truncated space.
pub const MAX_FULL_ROC_STATES: usize = 256;

/// A finished sweep; `failures` counts rows carrying an error marker.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub table: Table,
    pub failures: usize,
}

struct Row {
    values: Vec<Value>,
    failed: bool,
}

fn collect(columns: &[&str], rows: Vec<Vec<Row>>) -> SweepOutput {
    let mut table = Table::new(columns.iter().copied());
    let mut failures = 0;
    for row in rows.into_iter().flatten() {
        failures += usize::from(row.failed);
        table.push(row.values);
    }
    SweepOutput { table, failures }
}

fn probe_label(kind: ProbeKind) -> &'static str {
    match kind {
        ProbeKind::Vacuum => "vacuum",
        ProbeKind::Coherent => "coherent",
        ProbeKind::SqueezedVacuum => "squeezed-vacuum",
        ProbeKind::TwinBeam => "twin-beam",
    }
}

fn family_label(cfg: &ExperimentConfig) -> &'static str {
    match cfg.perturbation.family {
        crate::fock::Family::Displacement => "displacement",
        crate::fock::Family::Squeeze => "squeeze",
        crate::fock::Family::TwoModePhase => "two-mode-phase",
    }
}

fn perturbation(cfg: &ExperimentConfig, p: Perturbation) -> Result<Perturbation> {
    match cfg.perturbation.target {
        Some(t) => p.on(t),
        None => Ok(p),
    }
}

fn oracle(probe: &ProbeSpec, p: &Perturbation, policy: CutoffPolicy) -> Result<OracleOverlap> {
    let cfg = OracleConfig::default();
    match policy {
        CutoffPolicy::Auto => brute_force_overlap_auto(probe, p, &cfg),
        CutoffPolicy::Fixed(d) => brute_force_overlap_with(probe, p, Cutoff::new(d)?, &cfg),
    }
}

fn grid3<'a>(a: &'a [f64], b: &'a [f64], c: &'a [f64]) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for &x in a {
        for &y in b {
            for &z in c {
                out.push((x, y, z));
            }
        }
    }
    out
}

pub const OVERLAP_COLUMNS: [&str; 16] = [
    "index",
    "probe",
    "n",
    "family",
    "magnitude",
    "phase",
    "catalog",
    "kappa_sq_closed",
    "kappa_sq_oracle",
    "kappa_re",
    "kappa_im",
    "discrepancy",
    "flagged",
    "cutoff",
    "convergence_delta",
    "error",
];

/// Closed form and oracle side by side for every `(N, magnitude, phase)`.
pub fn run_overlap(cfg: &ExperimentConfig) -> std::result::Result<SweepOutput, ConfigError> {
    let policy = cfg.cutoff_policy()?;
    let mags = cfg.require_magnitudes()?;
    let points = grid3(&cfg.probe.energies, mags, &cfg.perturbation.phases);
    let rows = points
        .par_iter()
        .enumerate()
        .map(|(i, &(n, mag, phase))| vec![overlap_row(cfg, policy, i, n, mag, phase)])
        .collect();
    Ok(collect(&OVERLAP_COLUMNS, rows))
}

fn overlap_row(cfg: &ExperimentConfig, policy: CutoffPolicy, i: usize, n: f64, mag: f64, phase: f64) -> Row {
    let mut v = vec![
        i.into(),
        probe_label(cfg.probe.kind).into(),
        n.into(),
        family_label(cfg).into(),
        mag.into(),
        phase.into(),
    ];
    let setup = param_for_energy(cfg.probe.kind, n, cfg.probe.phase).and_then(|probe| {
        let p = perturbation(cfg, Perturbation::of_family(cfg.perturbation.family, mag, phase))?;
        Ok((probe, p))
    });
    let (probe, p) = match setup {
        Ok(s) => s,
        Err(e) => {
            v.extend(std::iter::repeat_n(Value::Empty, 9));
            v.push(e.to_string().into());
            return Row { values: v, failed: true };
        }
    };
    let mut errors = Vec::new();
    let closed = match closed_form(&probe, &p) {
        Some(Ok((entry, r))) => Some((entry, r)),
        Some(Err(e)) => {
            errors.push(format!("closed form: {e}"));
            None
        }
        None => None,
    };
    let orc = oracle(&probe, &p, policy).map_err(|e| errors.push(format!("oracle: {e}"))).ok();
    let discrepancy = match (&closed, &orc) {
        (Some((_, c)), Some(o)) => Some((c.kappa_sq - o.kappa_sq()).abs()),
        _ => None,
    };
    v.push(closed.map(|(e, _)| catalog_label(e)).into());
    v.push(closed.map(|(_, c)| c.kappa_sq).into());
    v.push(orc.map(|o| o.kappa_sq()).into());
    v.push(orc.map(|o| o.kappa.re).into());
    v.push(orc.map(|o| o.kappa.im).into());
    v.push(discrepancy.into());
    v.push(discrepancy.map(|d| d > DISCREPANCY_TOL).into());
    v.push(orc.map(|o| o.refined_dim).into());
    v.push(orc.map(|o| o.convergence_delta).into());
    let failed = !errors.is_empty();
    v.push(if failed { Value::Text(errors.join("; ")) } else { Value::Empty });
    Row { values: v, failed }
}

fn catalog_label(e: crate::overlap::CatalogEntry) -> &'static str {
    use crate::overlap::CatalogEntry as C;
    match e {
        C::SqvacDisplacement => "sqvac-displacement",
        C::TwinbeamDisplacement => "twinbeam-displacement",
        C::CoherentSqueeze => "coherent-squeeze",
        C::SqvacSqueeze => "sqvac-squeeze",
        C::TwinbeamSqueeze => "twinbeam-squeeze",
        C::TwinbeamPhase => "twinbeam-phase",
    }
}

pub const NP_SENSITIVITY_COLUMNS: [&str; 17] = [
    "index",
    "probe",
    "n",
    "family",
    "phase",
    "q0",
    "gamma_star",
    "lambda",
    "lambda_min",
    "kappa_sq_at_min",
    "q_det",
    "overlap_source",
    "iterations",
    "cutoff",
    "convergence_delta",
    "slope",
    "error",
];

pub const PHOTOCURRENT_SENSITIVITY_COLUMNS: [&str; 13] = [
    "index",
    "n",
    "x",
    "family",
    "q_target",
    "q0",
    "lambda_min",
    "p_zero",
    "q_det",
    "iterations",
    "n_terms",
    "slope",
    "error",
];

/// Minimum detectable perturbation per grid point. `lambda_min` is `|alpha|^2`
/// for the displacement, `r` or `phi` otherwise. Rows differing only in `n`
/// share a fitted log-log slope when at least four succeed.
pub fn run_sensitivity(cfg: &ExperimentConfig) -> std::result::Result<SweepOutput, ConfigError> {
    let policy = cfg.cutoff_policy()?;
    let decision = cfg.decision.as_ref().ok_or(ConfigError::Field {
        field: "decision",
        message: "the sensitivity command needs a [decision] section".into(),
    })?;
    let mut out = match decision {
        DecisionSection::Np {
            q0,
            gamma_star,
            overlap,
            envelope,
        } => {
            let mut points = Vec::new();
            for &n in &cfg.probe.energies {
                for &q in q0 {
                    for &g in gamma_star {
                        for &ph in &cfg.perturbation.phases {
                            points.push((n, q, g, ph));
                        }
                    }
                }
            }
            let rows = points
                .par_iter()
                .enumerate()
                .map(|(i, &(n, q, g, ph))| vec![np_row(cfg, policy, *overlap, *envelope, i, n, q, g, ph)])
                .collect();
            collect(&NP_SENSITIVITY_COLUMNS, rows)
        }
        DecisionSection::Photocurrent { q_target } => {
            require_twin_beam(cfg)?;
            let mut points = Vec::new();
            for &n in &cfg.probe.energies {
                for &q in q_target {
                    points.push((n, q));
                }
            }
            let rows = points
                .par_iter()
                .enumerate()
                .map(|(i, &(n, q))| vec![photocurrent_sensitivity_row(cfg, i, n, q)])
                .collect();
            collect(&PHOTOCURRENT_SENSITIVITY_COLUMNS, rows)
        }
    };
    fill_slopes(&mut out.table).expect("fixed columns");
    Ok(out)
}

fn require_twin_beam(cfg: &ExperimentConfig) -> std::result::Result<(), ConfigError> {
    if cfg.probe.kind != ProbeKind::TwinBeam {
        return Err(ConfigError::Field {
            field: "probe.kind",
            message: "difference-photocurrent detection needs a twin-beam probe".into(),
        });
    }
    Ok(())
}

struct OverlapEval {
    source: &'static str,
    cutoff: Option<usize>,
    delta: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn np_row(
    cfg: &ExperimentConfig,
    policy: CutoffPolicy,
    source: OverlapSource,
    envelope: Option<f64>,
    i: usize,
    n: f64,
    q0: f64,
    g: f64,
    phase: f64,
) -> Row {
    let family = cfg.perturbation.family;
    let mut v = vec![
        i.into(),
        probe_label(cfg.probe.kind).into(),
        n.into(),
        family_label(cfg).into(),
        phase.into(),
        q0.into(),
        g.into(),
    ];
    let result = (|| -> Result<(f64, crate::decision::SensitivityResult, OverlapEval)> {
        let spec = SensitivitySpec::new(q0, g)?;
        let big = lambda_threshold(&spec);
        let probe = param_for_energy(cfg.probe.kind, n, cfg.probe.phase)?;
        let at = |lambda: f64| perturbation(cfg, Perturbation::at_lambda(family, lambda, phase));
        let probe_p = at(0.0)?;
        let use_closed = match (source, closed_form(&probe, &probe_p)) {
            (OverlapSource::Oracle, _) => false,
            (OverlapSource::ClosedForm, None) => {
                return Err(invalid("no closed form for this probe/perturbation pair"));
            }
            (OverlapSource::ClosedForm, Some(_)) => true,
            (OverlapSource::Auto, Some(Ok((entry, _)))) => !entry.is_suspect(),
            (OverlapSource::Auto, _) => false,
        };
        let overlap_fn = |lambda: f64| -> Result<f64> {
            let p = at(lambda)?;
            if use_closed {
                closed_form(&probe, &p).expect("catalog pair").map(|(_, r)| r.kappa_sq)
            } else {
                oracle(&probe, &p, policy).map(|o| o.kappa_sq())
            }
        };
        let env = envelope.unwrap_or_else(|| default_envelope(family, n));
        let guess = initial_guess(family, n, big).min(env);
        let mut r = min_detectable_from_guess(overlap_fn, big, guess, env)?;
        r.q0 = q0;
        r.gamma_star = g;
        let eval = if use_closed || r.lambda_min == 0.0 {
            OverlapEval {
                source: if use_closed { "closed-form" } else { "oracle" },
                cutoff: None,
                delta: None,
            }
        } else {
            let o = oracle(&probe, &at(r.lambda_min)?, policy)?;
            OverlapEval {
                source: "oracle",
                cutoff: Some(o.refined_dim),
                delta: Some(o.convergence_delta),
            }
        };
        Ok((big, r, eval))
    })();
    match result {
        Ok((big, r, eval)) => {
            let kappa_sq = r.kappa_sq_at_min.clamp(0.0, 1.0);
            v.push(big.into());
            v.push(r.lambda_min.into());
            v.push(r.kappa_sq_at_min.into());
            v.push(detection_probability(q0, kappa_sq).ok().into());
            v.push(eval.source.into());
            v.push(r.iterations.into());
            v.push(eval.cutoff.into());
            v.push(eval.delta.into());
            v.push(Value::Empty);
            v.push(Value::Empty);
            Row { values: v, failed: false }
        }
        Err(e) => {
            let big = SensitivitySpec::new(q0, g).map(|s| lambda_threshold(&s)).ok();
            v.push(big.into());
            v.extend(std::iter::repeat_n(Value::Empty, 8));
            v.push(e.to_string().into());
            Row { values: v, failed: true }
        }
    }
}

fn photocurrent_sensitivity_row(cfg: &ExperimentConfig, i: usize, n: f64, q: f64) -> Row {
    let mut v = vec![
        i.into(),
        n.into(),
        twin_beam_x(n).into(),
        family_label(cfg).into(),
        q.into(),
        0.0.into(),
    ];
    match min_detectable_photocurrent(cfg.perturbation.family, n, q) {
        Ok(s) => {
            v.push(s.lambda_min.into());
            v.push(s.p_zero.into());
            v.push((1.0 - s.p_zero).into());
            v.push(s.iterations.into());
            v.push(s.n_terms.into());
            v.push(Value::Empty);
            v.push(Value::Empty);
            Row { values: v, failed: false }
        }
        Err(e) => {
            v.extend(std::iter::repeat_n(Value::Empty, 6));
            v.push(e.to_string().into());
            Row { values: v, failed: true }
        }
    }
}

/// Fill the `slope` column: rows agreeing on every input column except `n`
/// form a group, fitted when it has at least four positive `lambda_min`.
fn fill_slopes(table: &mut Table) -> Result<()> {
    let inputs: Vec<usize> = ["probe", "family", "phase", "q0", "gamma_star", "q_target"]
        .iter()
        .filter_map(|c| table.column_index(c).ok())
        .collect();
    let (i_n, i_l) = (table.column_index("n")?, table.column_index("lambda_min")?);
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (r, row) in table.rows().iter().enumerate() {
        let key = inputs.iter().map(|&j| format!("{:?}", row[j])).collect::<Vec<_>>().join("|");
        groups.entry(key).or_default().push(r);
    }
    for rows in groups.values() {
        let pts: Vec<(usize, f64, f64)> = rows
            .iter()
            .filter_map(|&r| {
                let row = &table.rows()[r];
                match (row[i_n].as_f64(), row[i_l].as_f64()) {
                    (Some(n), Some(l)) if n > 0.0 && l > 0.0 => Some((r, n, l)),
                    _ => None,
                }
            })
            .collect();
        let xs: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.2).collect();
        if let Ok(fit) = fit_loglog(&xs, &ys) {
            for &(r, _, _) in &pts {
                table.set(r, "slope", fit.slope.into())?;
            }
        }
    }
    Ok(())
}

pub const ROC_COLUMNS: [&str; 16] = [
    "index",
    "curve",
    "n",
    "family",
    "magnitude",
    "phase",
    "kappa_sq",
    "mu",
    "q0",
    "q_det",
    "q_det_analytic",
    "deviation",
    "projector_rank",
    "basis",
    "cutoff",
    "error",
];

/// Analytic pure-state ROC on a uniform `q0` grid, then the Helstrom ROC on a
/// logarithmic `mu` grid with the analytic value at each Helstrom `q0`.
pub fn run_roc(cfg: &ExperimentConfig) -> std::result::Result<SweepOutput, ConfigError> {
    let policy = cfg.cutoff_policy()?;
    let mags = cfg.require_magnitudes()?;
    let mus = log_mu_grid(cfg.roc.mu_min, cfg.roc.mu_max, cfg.roc.mu_points).map_err(|e| ConfigError::Field {
        field: "roc",
        message: e.to_string(),
    })?;
    let points = grid3(&cfg.probe.energies, mags, &cfg.perturbation.phases);
    let rows = points
        .par_iter()
        .enumerate()
        .map(|(i, &(n, mag, phase))| roc_rows(cfg, policy, &mus, i, n, mag, phase))
        .collect();
    Ok(collect(&ROC_COLUMNS, rows))
}

/// Probe and perturbed probe at a cutoff where both tails are below tolerance.
fn state_pair(probe: &ProbeSpec, p: &Perturbation, policy: CutoffPolicy) -> Result<(State, State)> {
    let tol = crate::probes::DEFAULT_TAIL_TOL;
    let mut c = match policy {
        CutoffPolicy::Fixed(d) => Cutoff::new(d)?,
        CutoffPolicy::Auto => initial_cutoff(crate::probes::mean_photon_number(probe), perturbation_scale_sq(p)),
    };
    loop {
        let attempt = synthesize_with(probe, c, tol).and_then(|psi| {
            let out = evolve(&psi, p)?;
            if out.tail_mass() > tol {
                return Err(Error::Truncation {
                    dim: c.dim(),
                    tail: out.tail_mass(),
                    tol,
                });
            }
            Ok((psi, out))
        });
        match (attempt, policy) {
            (Ok(pair), _) => return Ok(pair),
            (Err(e @ Error::Truncation { .. }), CutoffPolicy::Auto) if c.dim() < 512 => {
                let _ = e;
                c = c.doubled();
            }
            (Err(e), _) => return Err(e),
        }
    }
}

/// Orthonormal two-vector basis of `span{a, b}` and the coordinates of both.
fn span_coordinates(a: &[Complex64], b: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let proj = dot(a, b);
    let resid: Vec<Complex64> = b.iter().zip(a).map(|(bi, ai)| bi - ai * proj).collect();
    let rn = resid.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let zero = Complex64::new(0.0, 0.0);
    if rn < 1e-15 {
        return (vec![Complex64::new(1.0, 0.0), zero], vec![proj, zero]);
    }
    (vec![Complex64::new(1.0, 0.0), zero], vec![proj, Complex64::new(rn, 0.0)])
}

fn roc_rows(
    cfg: &ExperimentConfig,
    policy: CutoffPolicy,
    mus: &[f64],
    i: usize,
    n: f64,
    mag: f64,
    phase: f64,
) -> Vec<Row> {
    let head = |curve: &str| -> Vec<Value> {
        vec![
            i.into(),
            curve.into(),
            n.into(),
            family_label(cfg).into(),
            mag.into(),
            phase.into(),
        ]
    };
    let pair = param_for_energy(cfg.probe.kind, n, cfg.probe.phase).and_then(|probe| {
        let p = perturbation(cfg, Perturbation::of_family(cfg.perturbation.family, mag, phase))?;
        state_pair(&probe, &p, policy)
    });
    let (psi0, psi1) = match pair {
        Ok(p) => p,
        Err(e) => {
            let mut v = head("error");
            v.extend(std::iter::repeat_n(Value::Empty, 9));
            v.push(e.to_string().into());
            return vec![Row { values: v, failed: true }];
        }
    };
    let kappa_sq = dot(psi0.flat(), psi1.flat()).norm_sqr().min(1.0);
    let dim = psi0.dim();
    let mut rows = Vec::new();
    let q_points = cfg.roc.q0_points;
    for k in 0..q_points {
        let q0 = k as f64 / (q_points - 1) as f64;
        let q = detection_probability(q0, kappa_sq).expect("q0 and kappa_sq in range");
        let mut v = head("analytic");
        v.extend([
            kappa_sq.into(),
            Value::Empty,
            q0.into(),
            q.into(),
            q.into(),
            Value::Empty,
            Value::Empty,
            Value::Empty,
            dim.into(),
            Value::Empty,
        ]);
        rows.push(Row { values: v, failed: false });
    }
    let (a, b, basis) = if psi0.flat().len() <= MAX_FULL_ROC_STATES {
        (psi0.flat().to_vec(), psi1.flat().to_vec(), "full")
    } else {
        let (a, b) = span_coordinates(psi0.flat(), psi1.flat());
        (a, b, "span")
    };
    let (rho0, rho1): (DMatrix<Complex64>, DMatrix<Complex64>) = (pure_density(&a), pure_density(&b));
    match helstrom_roc(&rho0, &rho1, mus) {
        Ok(curve) => {
            for h in curve {
                let analytic = detection_probability(h.q0, kappa_sq).expect("in range");
                let mut v = head("helstrom");
                v.extend([
                    kappa_sq.into(),
                    h.mu.into(),
                    h.q0.into(),
                    h.q_det.into(),
                    analytic.into(),
                    (h.q_det - analytic).abs().into(),
                    h.projector_rank.into(),
                    basis.into(),
                    dim.into(),
                    Value::Empty,
                ]);
                rows.push(Row { values: v, failed: false });
            }
        }
        Err(e) => {
            let mut v = head("helstrom");
            v.extend(std::iter::repeat_n(Value::Empty, 9));
            v.push(e.to_string().into());
            rows.push(Row { values: v, failed: true });
        }
    }
    rows
}

pub const PHOTOCURRENT_COLUMNS: [&str; 17] = [
    "index",
    "n",
    "x",
    "family",
    "magnitude",
    "phase",
    "p_zero",
    "q_det",
    "q0",
    "n_terms",
    "p_zero_closed",
    "closed_form_status",
    "p_zero_oracle",
    "oracle_delta",
    "oracle_status",
    "cutoff",
    "error",
];

/// `P(d=0)` on a twin beam: exact diagonal sum, closed form (when inside its
/// envelope) and the full two-mode simulation.
pub fn run_photocurrent(cfg: &ExperimentConfig) -> std::result::Result<SweepOutput, ConfigError> {
    require_twin_beam(cfg)?;
    let policy = cfg.cutoff_policy()?;
    let mags = cfg.require_magnitudes()?;
    let points = grid3(&cfg.probe.energies, mags, &cfg.perturbation.phases);
    let rows = points
        .par_iter()
        .enumerate()
        .map(|(i, &(n, mag, phase))| vec![photocurrent_row(cfg, policy, i, n, mag, phase)])
        .collect();
    Ok(collect(&PHOTOCURRENT_COLUMNS, rows))
}

fn photocurrent_row(cfg: &ExperimentConfig, policy: CutoffPolicy, i: usize, n: f64, mag: f64, phase: f64) -> Row {
    let x = twin_beam_x(n);
    let mut v = vec![
        i.into(),
        n.into(),
        x.into(),
        family_label(cfg).into(),
        mag.into(),
        phase.into(),
    ];
    let p = match perturbation(cfg, Perturbation::of_family(cfg.perturbation.family, mag, phase)) {
        Ok(p) => p,
        Err(e) => {
            v.extend(std::iter::repeat_n(Value::Empty, 10));
            v.push(e.to_string().into());
            return Row { values: v, failed: true };
        }
    };
    let exact = p_zero_diagonal(x, &p);
    let closed = closed_form_p_zero(cfg.perturbation.family, n, p.lambda());
    let orc = match policy {
        CutoffPolicy::Auto => p_zero_difference_auto(x, &p, &OracleConfig::default()),
        CutoffPolicy::Fixed(d) => {
            Cutoff::new(d).and_then(|c| p_zero_difference_with(x, &p, c, &OracleConfig::default()))
        }
    };
    let failed = exact.is_err();
    match &exact {
        Ok(r) => v.extend([r.p_zero.into(), r.q_det.into(), r.q0.into(), r.n_terms.into()]),
        Err(_) => v.extend(std::iter::repeat_n(Value::Empty, 4)),
    }
    match &closed {
        Ok(c) => v.extend([(*c).into(), "ok".into()]),
        Err(e) => v.extend([Value::Empty, e.to_string().into()]),
    }
    match &orc {
        Ok(o) => v.extend([o.p_zero.into(), o.convergence_delta.into(), "ok".into(), o.n_terms.into()]),
        Err(e) => v.extend([Value::Empty, Value::Empty, e.to_string().into(), Value::Empty]),
    }
    v.push(exact.err().map(|e| e.to_string()).into());
    Row { values: v, failed }
}
