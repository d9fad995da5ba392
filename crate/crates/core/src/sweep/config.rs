//! Experiment configuration, read from TOML.
//!
//! ```toml
//! [probe]
//! kind = "twin-beam"
//! energies = [5.0, 10.0, 20.0, 40.0, 80.0]
//!
//! [perturbation]
//! family = "two-mode-phase"
//! magnitudes = [0.01, 0.05]
//!
//! [decision]
//! kind = "np"
//! q0 = [0.01]
//! gamma_star = [50.0]
//!
//! [cutoff]
//! policy = "auto"
//!
//! [output]
//! path = "phase.csv"
//! format = "csv"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::fock::{Cutoff, Family, Target};
use crate::probes::ProbeKind;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config field `{field}`: {message}")]
    Field { field: &'static str, message: String },
}

fn field(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub probe: ProbeSection,
    pub perturbation: PerturbationSection,
    #[serde(default)]
    pub decision: Option<DecisionSection>,
    #[serde(default)]
    pub cutoff: CutoffSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub roc: RocSection,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    pub kind: ProbeKind,
    /// Mean total photon numbers `N`.
    #[serde(default = "zero_grid")]
    pub energies: Vec<f64>,
    /// Argument of the coherent amplitude or squeezing parameter.
    #[serde(default)]
    pub phase: f64,
}

fn zero_grid() -> Vec<f64> {
    vec![0.0]
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSection {
    pub family: Family,
    /// `|alpha|`, `r` or `phi`. Sensitivity runs ignore it.
    #[serde(default)]
    pub magnitudes: Vec<f64>,
    /// Arguments of `alpha` or `zeta`.
    #[serde(default = "zero_grid")]
    pub phases: Vec<f64>,
    #[serde(default)]
    pub target: Option<Target>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverlapSource {
    /// Closed form when the catalog has a trusted one, oracle otherwise.
    #[default]
    Auto,
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DecisionSection {
    Np {
        q0: Vec<f64>,
        gamma_star: Vec<f64>,
        #[serde(default)]
        overlap: OverlapSource,
        /// Upper end of the bisection bracket; family default when absent.
        #[serde(default)]
        envelope: Option<f64>,
    },
    Photocurrent {
        q_target: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutoffPolicy {
    #[default]
    Auto,
    Fixed(usize),
}

impl FromStr for CutoffPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(CutoffPolicy::Auto);
        }
        let dim: usize = s.parse().map_err(|_| format!("expected `auto` or a dimension, got `{s}`"))?;
        Cutoff::new(dim).map_err(|e| e.to_string())?;
        Ok(CutoffPolicy::Fixed(dim))
    }
}

impl fmt::Display for CutoffPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutoffPolicy::Auto => write!(f, "auto"),
            CutoffPolicy::Fixed(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffSection {
    #[serde(default)]
    pub policy: Option<String>,
    #[serde(default)]
    pub dim: Option<usize>,
}

impl CutoffSection {
    pub fn resolve(&self) -> Result<CutoffPolicy, ConfigError> {
        match (self.policy.as_deref(), self.dim) {
            (None, None) => Ok(CutoffPolicy::Auto),
            (Some(p), None) if p.eq_ignore_ascii_case("auto") => Ok(CutoffPolicy::Auto),
            (Some(p), Some(d)) if p.eq_ignore_ascii_case("fixed") => fixed(d),
            (None, Some(d)) => fixed(d),
            (Some("fixed"), None) => Err(field("cutoff.dim", "fixed policy needs a dimension")),
            (Some(p), _) => Err(field("cutoff.policy", format!("unknown policy `{p}`"))),
        }
    }
}

fn fixed(d: usize) -> Result<CutoffPolicy, ConfigError> {
    Cutoff::new(d).map_err(|e| field("cutoff.dim", e.to_string()))?;
    Ok(CutoffPolicy::Fixed(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!("unknown format `{other}` (csv or jsonl)")),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RocSection {
    #[serde(default = "default_q0_points")]
    pub q0_points: usize,
    #[serde(default = "default_mu_min")]
    pub mu_min: f64,
    #[serde(default = "default_mu_max")]
    pub mu_max: f64,
    #[serde(default = "default_mu_points")]
    pub mu_points: usize,
}

fn default_q0_points() -> usize {
    101
}
fn default_mu_min() -> f64 {
    crate::decision::helstrom::DEFAULT_MU_MIN
}
fn default_mu_max() -> f64 {
    crate::decision::helstrom::DEFAULT_MU_MAX
}
fn default_mu_points() -> usize {
    crate::decision::helstrom::DEFAULT_MU_POINTS
}

impl Default for RocSection {
    fn default() -> Self {
        RocSection {
            q0_points: default_q0_points(),
            mu_min: default_mu_min(),
            mu_max: default_mu_max(),
            mu_points: default_mu_points(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn cutoff_policy(&self) -> Result<CutoffPolicy, ConfigError> {
        self.cutoff.resolve()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        nonempty_finite("probe.energies", &self.probe.energies)?;
        if self.probe.energies.iter().any(|&n| n < 0.0) {
            return Err(field("probe.energies", "photon numbers must be >= 0"));
        }
        if self.probe.kind == ProbeKind::Vacuum && self.probe.energies.iter().any(|&n| n > 0.0) {
            return Err(field("probe.energies", "the vacuum probe only admits N = 0"));
        }
        if !self.probe.phase.is_finite() {
            return Err(field("probe.phase", "must be finite"));
        }
        finite("perturbation.magnitudes", &self.perturbation.magnitudes)?;
        if self.perturbation.magnitudes.iter().any(|&m| m < 0.0) {
            return Err(field("perturbation.magnitudes", "magnitudes must be >= 0"));
        }
        nonempty_finite("perturbation.phases", &self.perturbation.phases)?;
        match (self.perturbation.family, self.perturbation.target) {
            (Family::TwoModePhase, Some(t)) if t != Target::Both => {
                return Err(field("perturbation.target", "the two-mode phase shift acts on both modes"));
            }
            (Family::Displacement | Family::Squeeze, Some(Target::Both)) => {
                return Err(field("perturbation.target", "single-mode perturbations take `a` or `b`"));
            }
            _ => {}
        }
        match &self.decision {
            Some(DecisionSection::Np {
                q0,
                gamma_star,
                envelope,
                ..
            }) => {
                nonempty_finite("decision.q0", q0)?;
                nonempty_finite("decision.gamma_star", gamma_star)?;
                for &q in q0 {
                    if !(0.0..1.0).contains(&q) {
                        return Err(field("decision.q0", format!("{q} outside [0, 1)")));
                    }
                    for &g in gamma_star {
                        if g < 1.0 {
                            return Err(field("decision.gamma_star", format!("{g} is below 1")));
                        }
                        if g * q > 1.0 {
                            return Err(field(
                                "decision.gamma_star",
                                format!("gamma* q0 = {} exceeds 1 (q0 = {q}, gamma* = {g})", g * q),
                            ));
                        }
                    }
                }
                if let Some(e) = envelope {
                    if !(*e > 0.0) || !e.is_finite() {
                        return Err(field("decision.envelope", "must be positive"));
                    }
                }
            }
            Some(DecisionSection::Photocurrent { q_target }) => {
                nonempty_finite("decision.q_target", q_target)?;
                if q_target.iter().any(|&q| !(q > 0.0 && q < 1.0)) {
                    return Err(field("decision.q_target", "targets must lie in (0, 1)"));
                }
            }
            None => {}
        }
        if self.roc.q0_points < 2 {
            return Err(field("roc.q0_points", "need at least 2 points"));
        }
        if !(self.roc.mu_min > 0.0 && self.roc.mu_max > self.roc.mu_min) || self.roc.mu_points < 2 {
            return Err(field("roc.mu_min", "mu grid needs 0 < mu_min < mu_max and >= 2 points"));
        }
        self.cutoff.resolve()?;
        Ok(())
    }

    pub fn require_magnitudes(&self) -> Result<&[f64], ConfigError> {
        if self.perturbation.magnitudes.is_empty() {
            return Err(field("perturbation.magnitudes", "this command needs a non-empty grid"));
        }
        Ok(&self.perturbation.magnitudes)
    }
}

fn finite(name: &'static str, v: &[f64]) -> Result<(), ConfigError> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(field(name, "values must be finite"));
    }
    Ok(())
}

fn nonempty_finite(name: &'static str, v: &[f64]) -> Result<(), ConfigError> {
    if v.is_empty() {
        return Err(field(name, "grid is empty"));
    }
    finite(name, v)
}
