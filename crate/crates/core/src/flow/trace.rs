use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Preset, WarpedMetric};

/// Parameters of a single flow run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub n_cells: usize,
    /// Fraction of the explicit diffusive limit `(rho dx)^2`; in `(0, 0.5]`.
    pub cfl_factor: f64,
    pub t_end: Option<f64>,
    /// The run stops once `max R >= r_stop`.
    pub r_stop: f64,
    /// Record monitors (and keep a snapshot) every this many steps.
    pub record_every: usize,
    pub preset: Preset,
    /// Allowed `|phi_s(0) - 1|`.
    pub origin_tol: f64,
    /// Allowed `|phi_s(1) - kappa phi(1)|` after each accepted step.
    pub boundary_tol: f64,
    /// Exponent gap for the `f_delta` monitor; `None` means
    /// `min(0.1, 2 eps_star(0)^2)`.
    pub delta: Option<f64>,
    pub max_steps: usize,
}

impl FlowConfig {
    pub fn new(preset: Preset) -> Self {
        Self {
            n_cells: 256,
            cfl_factor: 0.25,
            t_end: None,
            r_stop: 1000.0,
            record_every: 20,
            preset,
            origin_tol: 1e-3,
            boundary_tol: 1e-10,
            delta: None,
            max_steps: 20_000_000,
        }
    }

    pub fn with_cells(mut self, n_cells: usize) -> Self {
        self.n_cells = n_cells;
        self
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = Some(t_end);
        self
    }

    pub fn with_r_stop(mut self, r_stop: f64) -> Self {
        self.r_stop = r_stop;
        self
    }

    pub fn with_record_every(mut self, record_every: usize) -> Self {
        self.record_every = record_every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl_factor > 0.0 && self.cfl_factor <= 0.5) {
            return Err(Error::invalid(format!(
                "cfl_factor must lie in (0, 0.5], got {}",
                self.cfl_factor
            )));
        }
        if self.record_every == 0 {
            return Err(Error::invalid("record_every must be at least 1"));
        }
        if !(self.r_stop > 0.0) {
            return Err(Error::invalid(format!(
                "r_stop must be positive, got {}",
                self.r_stop
            )));
        }
        if let Some(t) = self.t_end {
            if !(t > 0.0) {
                return Err(Error::invalid(format!("t_end must be positive, got {t}")));
            }
        }
        if let Some(d) = self.delta {
            if !(0.0..=0.5).contains(&d) {
                return Err(Error::invalid(format!(
                    "delta must lie in [0, 0.5], got {d}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// `max R` reached `r_stop`.
    BlowUp,
    TEnd,
    /// The metric degenerated (non-positive or non-finite `phi`/`rho`).
    Degenerate,
    StepLimit,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::BlowUp => "blow-up",
            StopReason::TEnd => "t_end",
            StopReason::Degenerate => "degenerate",
            StopReason::StepLimit => "step-limit",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StopReason {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blow-up" => Ok(StopReason::BlowUp),
            "t_end" => Ok(StopReason::TEnd),
            "degenerate" => Ok(StopReason::Degenerate),
            "step-limit" => Ok(StopReason::StepLimit),
            other => Err(Error::invalid(format!("unknown stop reason `{other}`"))),
        }
    }
}

/// Monitors recorded at one instant of a run. Quantities that are undefined
/// at that instant (pinching with `R <= 0`) are `NaN`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: usize,
    pub time: f64,
    /// Step size used to leave this state (the last one taken for the final record).
    pub dt: f64,
    pub r_max: f64,
    pub r_min: f64,
    pub ric_min: f64,
    pub volume: f64,
    /// `int R dV`.
    pub total_scalar: f64,
    pub eps_star: f64,
    pub f_max: f64,
    pub f_delta_max: f64,
    /// `max (S - R^2/3)` over nodes.
    pub anisotropy_max: f64,
    pub i1n: f64,
    pub i2n: f64,
    pub i3n: f64,
    pub h_margin: f64,
    pub kappa: f64,
    /// `max(|k_rad|, |k_sph|)`.
    pub rm_max: f64,
    /// `max(|d_s k_rad|, |d_s k_sph|)`.
    pub drm_max: f64,
    /// Scale-invariant curvature spread `(max - min)/mean`.
    pub spread: f64,
    pub origin_drift: f64,
    pub boundary_residual: f64,
}

/// Output of [`run`](super::run): one record and one snapshot per recorded
/// instant, plus the reason the run ended.
#[derive(Clone, Debug)]
pub struct FlowTrace {
    pub config: FlowConfig,
    pub delta: f64,
    pub records: Vec<TraceRecord>,
    pub snapshots: Vec<WarpedMetric>,
    pub stop_reason: StopReason,
    pub stop_detail: Option<String>,
}

impl FlowTrace {
    pub fn first(&self) -> &TraceRecord {
        &self.records[0]
    }

    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("trace has at least one record")
    }

    pub fn final_time(&self) -> f64 {
        self.last().time
    }
}
