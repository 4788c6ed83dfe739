use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{Cgle3SolitonParams, ModelKind, ModelSpec, NlseSolitonParams};
use crate::schemes::{scheme_by_name, step_count};
use crate::spectral::Basis;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisConfig {
    Fourier { n: usize, interval: (f64, f64) },
    Hermite {
        n: usize,
        #[serde(default = "unit", alias = "s")]
        scaling: f64,
    },
}

fn unit() -> f64 {
    1.0
}

impl BasisConfig {
    pub fn n(&self) -> usize {
        match self {
            BasisConfig::Fourier { n, .. } | BasisConfig::Hermite { n, .. } => *n,
        }
    }

    pub fn with_n(&self, n: usize) -> Self {
        match *self {
            BasisConfig::Fourier { interval, .. } => BasisConfig::Fourier { n, interval },
            BasisConfig::Hermite { scaling, .. } => BasisConfig::Hermite { n, scaling },
        }
    }

    pub fn build(&self) -> Result<Basis> {
        match *self {
            BasisConfig::Fourier { n, interval } => Basis::fourier(n, interval),
            BasisConfig::Hermite { n, scaling } => Basis::hermite(n, scaling),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialCondition {
    NlseSoliton(NlseSolitonParams),
    Cgle3Soliton(Cgle3SolitonParams),
    /// `amplitude · exp(-x² / 2width²)`
    Gaussian { amplitude: f64, #[serde(default = "unit")] width: f64 },
    /// Ground state of the focusing fNLSE3 (Fourier grids only).
    Stationary { alpha: f64, omega: f64 },
    /// Snapshot CSV with columns `x, re, im` on the configured grid.
    File { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    /// Closed-form solution of the initial condition.
    #[default]
    Exact,
    Rk853,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReferenceConfig {
    Kind(ReferenceKind),
    File { file: PathBuf },
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        ReferenceConfig::Kind(ReferenceKind::Exact)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    ErrInf,
    EpsMass,
    EpsHam,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObserverConfig {
    /// Sample every `stride` steps (the first and last step are always sampled).
    #[serde(default = "one")]
    pub stride: usize,
    #[serde(default = "all_metrics")]
    pub metrics: Vec<Metric>,
    /// Write a field snapshot every `snapshot_stride` steps; 0 keeps only
    /// the initial and final states.
    #[serde(default)]
    pub snapshot_stride: usize,
}

fn one() -> usize {
    1
}

fn all_metrics() -> Vec<Metric> {
    vec![Metric::ErrInf, Metric::EpsMass, Metric::EpsHam]
}

impl Default for ObserverConfig {
    fn default() -> Self {
        ObserverConfig {
            stride: 1,
            metrics: all_metrics(),
            snapshot_stride: 0,
        }
    }
}

/// One experiment: model, grid, scheme(s), step(s) and outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Inferred from the initial condition when omitted.
    #[serde(default)]
    pub model: Option<ModelSpec>,
    pub basis: BasisConfig,
    #[serde(default = "default_scheme")]
    pub scheme: String,
    /// Schemes for `sweep-dt`; defaults to all builtin schemes.
    #[serde(default)]
    pub schemes: Option<Vec<String>>,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub dt_sweep: Option<Vec<f64>>,
    #[serde(default)]
    pub n_sweep: Option<Vec<usize>>,
    pub t_final: f64,
    pub initial: InitialCondition,
    #[serde(default)]
    pub observers: ObserverConfig,
    #[serde(default)]
    pub reference: ReferenceConfig,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_scheme() -> String {
    "affine6".to_string()
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn field_error(field: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("field `{field}`: {reason}"))
}

/// 16 log-spaced steps from 0.5 down to 1e-3.
pub fn default_dt_sweep() -> Vec<f64> {
    let (hi, lo) = (0.5f64.ln(), 1e-3f64.ln());
    (0..16).map(|i| (hi + (lo - hi) * i as f64 / 15.0).exp()).collect()
}

/// Rounds `dt` to the nearest `t_final / m`.
pub fn snap_dt(dt: f64, t_final: f64) -> f64 {
    let m = (t_final / dt).round().max(1.0);
    t_final / m
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        if let InitialCondition::File { path: p } = &mut cfg.initial {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// The model, explicit or implied by the initial condition.
    pub fn resolved_model(&self) -> Result<ModelSpec> {
        if let Some(m) = self.model {
            return Ok(m);
        }
        match &self.initial {
            InitialCondition::NlseSoliton(_) => ModelSpec::nlse3(-1.0),
            InitialCondition::Cgle3Soliton(p) => p.model(),
            InitialCondition::Stationary { alpha, .. } => ModelSpec::fnlse3(*alpha, -1.0),
            _ => Err(field_error("model", "required for this initial condition")),
        }
    }

    pub fn resolved_dt(&self) -> Result<f64> {
        self.dt.ok_or_else(|| field_error("dt", "required"))
    }

    pub fn resolved_schemes(&self) -> Vec<String> {
        self.schemes
            .clone()
            .unwrap_or_else(|| crate::schemes::SCHEME_NAMES.iter().map(|s| s.to_string()).collect())
    }

    /// The Δt sweep snapped to whole step counts, duplicates removed.
    pub fn resolved_dt_sweep(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .dt_sweep
            .clone()
            .unwrap_or_else(default_dt_sweep)
            .into_iter()
            .map(|dt| snap_dt(dt, self.t_final))
            .collect();
        out.dedup();
        out
    }

    pub fn validate(&self) -> Result<()> {
        let model = self.resolved_model()?;
        model.validate().map_err(|e| field_error("model", e))?;
        self.basis.build().map_err(|e| field_error("basis", e))?;
        scheme_by_name(&self.scheme).map_err(|e| field_error("scheme", e))?;
        if let Some(list) = &self.schemes {
            if list.is_empty() {
                return Err(field_error("schemes", "must not be empty"));
            }
            for s in list {
                scheme_by_name(s).map_err(|e| field_error("schemes", e))?;
            }
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(field_error("t_final", format!("must be positive, got {}", self.t_final)));
        }
        if let Some(dt) = self.dt {
            step_count(dt, self.t_final).map_err(|e| field_error("dt", e))?;
        }
        if let Some(list) = &self.dt_sweep {
            if list.is_empty() {
                return Err(field_error("dt_sweep", "must not be empty"));
            }
            if list.iter().any(|&d| !(d.is_finite() && d > 0.0 && d <= self.t_final)) {
                return Err(field_error("dt_sweep", "entries must lie in (0, t_final]"));
            }
            if list.windows(2).any(|w| w[1] >= w[0]) {
                return Err(field_error("dt_sweep", "must be strictly decreasing"));
            }
        }
        if let Some(list) = &self.n_sweep {
            if list.is_empty() || list.iter().any(|&n| n < 2) {
                return Err(field_error("n_sweep", "entries must be at least 2"));
            }
            if list.windows(2).any(|w| w[1] <= w[0]) {
                return Err(field_error("n_sweep", "must be strictly increasing"));
            }
        }
        if self.observers.stride == 0 {
            return Err(field_error("observers.stride", "must be positive"));
        }
        self.validate_initial(&model)
    }

    fn validate_initial(&self, model: &ModelSpec) -> Result<()> {
        let exact = self.reference == ReferenceConfig::Kind(ReferenceKind::Exact);
        match &self.initial {
            InitialCondition::NlseSoliton(p) => {
                p.validate().map_err(|e| field_error("initial", e))?;
                if exact && *model != ModelSpec::nlse3(-1.0)? {
                    return Err(field_error("reference", "exact NLSE soliton requires the focusing nlse3 model"));
                }
            }
            InitialCondition::Cgle3Soliton(p) => {
                p.validate().map_err(|e| field_error("initial", e))?;
                if exact {
                    let m = p.model()?;
                    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
                    let ok = model.kind == ModelKind::Cgle3
                        && close(model.beta, m.beta)
                        && model.delta == 0.0
                        && close(model.gamma, m.gamma)
                        && close(model.epsilon, m.epsilon);
                    if !ok {
                        return Err(field_error(
                            "reference",
                            format!("exact CGLE3 soliton requires beta = {}, delta = 0, gamma = -1, epsilon = {}", m.beta, m.epsilon),
                        ));
                    }
                }
            }
            InitialCondition::Gaussian { amplitude, width } => {
                if !(amplitude.is_finite() && width.is_finite() && *width > 0.0) {
                    return Err(field_error("initial", "gaussian needs finite amplitude and positive width"));
                }
                if exact {
                    return Err(field_error("reference", "no exact solution for a gaussian; use rk853 or none"));
                }
            }
            InitialCondition::Stationary { alpha, omega } => {
                if !matches!(self.basis, BasisConfig::Fourier { .. }) {
                    return Err(field_error("initial", "stationary states are computed on Fourier grids"));
                }
                if !(*alpha > 1.0 && *alpha <= 2.0 && *omega > 0.0) {
                    return Err(field_error("initial", "stationary needs alpha in (1, 2] and omega > 0"));
                }
                if exact && (model.kind != ModelKind::Fnlse3 && model.kind != ModelKind::Nlse3
                    || model.alpha != *alpha
                    || model.sign != -1.0)
                {
                    return Err(field_error("reference", "exact standing wave requires the matching focusing fnlse3 model"));
                }
            }
            InitialCondition::File { .. } => {
                if exact {
                    return Err(field_error("reference", "no exact solution for a file initial condition"));
                }
            }
        }
        if let ReferenceConfig::File { file } = &self.reference {
            if file.as_os_str().is_empty() {
                return Err(field_error("reference", "empty file path"));
            }
        }
        Ok(())
    }
}

/// Evaluates a closed-form initial condition on the grid nodes.
pub(crate) fn closed_form(initial: &InitialCondition, x: f64, t: f64) -> Option<Complex64> {
    match initial {
        InitialCondition::NlseSoliton(p) => Some(p.eval(x, t)),
        InitialCondition::Cgle3Soliton(p) => Some(p.eval(x, t)),
        InitialCondition::Gaussian { amplitude, width } if t == 0.0 => {
            Some(Complex64::new(amplitude * (-x * x / (2.0 * width * width)).exp(), 0.0))
        }
        _ => None,
    }
}
