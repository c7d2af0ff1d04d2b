//! Ricci flow of rotationally symmetric 3-balls whose boundary sphere is
//! umbilic with a fixed principal curvature `kappa >= 0`.
//!
//! The metric is stored as a warped product `g = rho(x)^2 dx^2 + phi(x)^2 g_S2`
//! on the fixed computational interval `x in [0, 1]`. The crate provides
//!
//! * [`geometry`]: grids, metrics, curvature fields and initial-data presets,
//! * [`flow`]: an explicit RK4 method-of-lines solver for `dg/dt = -2 Ric`
//!   with the Robin condition `phi_s = kappa phi` at the boundary, and the
//!   volume-normalised view of a run,
//! * [`identities`]: residuals of the boundary normal-derivative identities
//!   and grid-convergence studies of them,
//! * [`pinching`]: Ricci pinching functionals, boundary sign formulas and the
//!   gradient-ratio functional,
//! * [`harness`]: configuration files, CSV/JSON persistence, run reports,
//!   convergence tables and SVG plots (driven by the `ricci-umbilic` binary).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod flow;
pub mod geometry;
pub mod harness;
pub mod identities;
mod parallel;
pub mod pinching;

pub use error::{Error, Result};
pub use flow::{
    apply_boundary_conditions, cfl_dt, flow_rates, gauge_rates, normalize_trace, ricci_rhs, run,
    run_from, step, FlowConfig, FlowTrace, NormalizedTrace, StopReason, TraceRecord,
};
pub use geometry::{
    arclength_derivative, curvature, make_preset, rescale, second_fundamental_form, volume,
    BoundaryState, CurvatureField, Preset, RadialGrid, WarpedMetric,
};
