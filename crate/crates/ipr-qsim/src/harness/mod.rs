//! Experiment harness: named experiment configs, deterministic CSV output,
//! and run manifests.
//!
//! A run is one config file. CLI flags override file values; the effective
//! config is what the manifest records. Identical config plus seed yields
//! byte-identical CSV output (wall-clock timings go to stderr, never into
//! the CSV).

mod experiments;
mod output;
mod verify;

pub use experiments::{
    evolution_matrix, ground_state, run_aklt_sweep, run_bound_study, run_experiment,
    run_m_convergence, run_oat_sweep, run_pxp_sweep, BOUND_SLACK,
};
pub use output::{csv_text, emit_csv, run_id, write_manifest, CSV_HEADER};
pub use verify::{run_verification, CheckResult, VerificationReport};

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    OatSweep,
    PxpSweep,
    AkltSweep,
    MConvergence,
    BoundStudy,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::OatSweep => "oat_sweep",
            ExperimentKind::PxpSweep => "pxp_sweep",
            ExperimentKind::AkltSweep => "aklt_sweep",
            ExperimentKind::MConvergence => "m_convergence",
            ExperimentKind::BoundStudy => "bound_study",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "oat_sweep" => Ok(ExperimentKind::OatSweep),
            "pxp_sweep" => Ok(ExperimentKind::PxpSweep),
            "aklt_sweep" => Ok(ExperimentKind::AkltSweep),
            "m_convergence" => Ok(ExperimentKind::MConvergence),
            "bound_study" => Ok(ExperimentKind::BoundStudy),
            other => Err(Error::Config(format!("unknown experiment '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Sampled,
}

/// A one-dimensional parameter grid: either explicit points, or a linear
/// range with a step, or a log-spaced range with a point count.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// "linear" (default) or "log".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacing: Option<String>,
}

impl GridSpec {
    pub fn from_points(points: Vec<f64>) -> Self {
        GridSpec {
            points: Some(points),
            ..Default::default()
        }
    }

    pub fn linear(start: f64, stop: f64, step: f64) -> Self {
        GridSpec {
            start: Some(start),
            stop: Some(stop),
            step: Some(step),
            ..Default::default()
        }
    }

    pub fn resolve(&self) -> Result<Vec<f64>> {
        let pts = if let Some(points) = &self.points {
            points.clone()
        } else {
            let (start, stop) = match (self.start, self.stop) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::Config(
                        "grid needs either points or start/stop".into(),
                    ))
                }
            };
            match self.spacing.as_deref() {
                None | Some("linear") => {
                    let step = self
                        .step
                        .ok_or_else(|| Error::Config("linear grid needs a step".into()))?;
                    if !(step.is_finite() && step > 0.0) {
                        return Err(Error::Config(format!("bad grid step {step}")));
                    }
                    let n = ((stop - start) / step + 1.5).floor() as usize;
                    (0..n).map(|k| start + k as f64 * step).collect()
                }
                Some("log") => {
                    let count = self
                        .count
                        .ok_or_else(|| Error::Config("log grid needs a count".into()))?;
                    if count < 2 || start <= 0.0 || stop <= start {
                        return Err(Error::Config(
                            "log grid needs count >= 2 and 0 < start < stop".into(),
                        ));
                    }
                    let ratio = (stop / start).ln() / (count - 1) as f64;
                    (0..count)
                        .map(|k| start * (ratio * k as f64).exp())
                        .collect()
                }
                Some(other) => {
                    return Err(Error::Config(format!("unknown grid spacing '{other}'")))
                }
            }
        };
        if pts.is_empty() {
            return Err(Error::Config("grid resolved to no points".into()));
        }
        if pts.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("grid contains NaN or infinity".into()));
        }
        Ok(pts)
    }
}

/// Full description of one experiment run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Chain length.
    #[serde(default, alias = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    /// Renyi index for computational-basis estimators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    /// Local dimension (AKLT fixes 3).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<GridSpec>,
    /// Single field strength (m_convergence).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Ancilla counts for eigenbasis sweeps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_list: Option<Vec<usize>>,
    /// Evolution time for eigenbasis sweeps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_trotter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_shots: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Random-matrix trials in the bound study.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble_size: Option<usize>,
    /// Output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        ExperimentConfig {
            experiment,
            l: None,
            q: None,
            d: None,
            h_grid: None,
            t_grid: None,
            h: None,
            m_list: None,
            t: None,
            n_trotter: None,
            periodic: None,
            mode: None,
            n_shots: None,
            seed: None,
            ensemble_size: None,
            out: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn mode(&self) -> Mode {
        self.mode.unwrap_or(Mode::Exact)
    }

    /// Reject contradictory or unusable parameter combinations before any
    /// computation starts.
    pub fn validate(&self) -> Result<()> {
        if let Some(grid) = &self.h_grid {
            grid.resolve()?;
        }
        if let Some(grid) = &self.t_grid {
            grid.resolve()?;
        }
        if let Some(ms) = &self.m_list {
            if ms.is_empty() {
                return Err(Error::Config("m_list is empty".into()));
            }
            if ms.iter().any(|&m| m < 1) {
                return Err(Error::Config("ancilla count m must be >= 1".into()));
            }
        }
        if let Some(t) = self.t {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Config(format!("evolution time t = {t} invalid")));
            }
        }
        if let Some(h) = self.h {
            if !h.is_finite() {
                return Err(Error::Config("field strength h must be finite".into()));
            }
        }
        if let Some(n) = self.n_trotter {
            if n == 0 {
                return Err(Error::Config("n_trotter must be >= 1".into()));
            }
        }
        if let Some(q) = self.q {
            if q < 2 {
                return Err(Error::Config("Renyi index q must be >= 2".into()));
            }
        }
        if self.mode() == Mode::Sampled {
            match self.n_shots {
                Some(n) if n >= 1 => {}
                _ => {
                    return Err(Error::Config(
                        "sampled mode requires n_shots >= 1".into(),
                    ))
                }
            }
            if self.seed.is_none() {
                return Err(Error::Config("sampled mode requires a seed".into()));
            }
        }
        Ok(())
    }
}

/// One sweep point of one experiment.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub experiment: String,
    /// Name of the independent variable ("t", "h", "m", "trial",
    /// "n_trotter").
    pub variable: String,
    pub value: f64,
    pub m: Option<usize>,
    pub estimator: f64,
    pub oracle: Option<f64>,
    pub error_bound: Option<f64>,
    pub std_error: f64,
    pub delta_sigma_z: Option<f64>,
    /// Row annotations ("ground-degenerate", "violation", ...), empty when
    /// unremarkable.
    pub flag: String,
    /// Wall time of the sweep point; reported on stderr, never in the CSV.
    pub wall_ms: f64,
}

/// Configure the global worker pool from `IPR_QSIM_THREADS`, if set.
/// Harmless to call more than once.
pub fn init_thread_pool() {
    if let Ok(v) = std::env::var("IPR_QSIM_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}
