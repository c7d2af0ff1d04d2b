//! Unnormalised Ricci flow `dg/dt = -2 Ric(g)` with `h = kappa g` on the
//! boundary, and its volume-normalised reparametrisation.

mod normalize;
mod solver;
mod trace;

pub use normalize::{normalize_trace, NormalizedRecord, NormalizedTrace};
pub use solver::{
    apply_boundary_conditions, cfl_dt, flow_rates, gauge_rates, ricci_rhs, run, run_from, step,
    GAUGE_STRENGTH,
};
pub use trace::{FlowConfig, FlowTrace, StopReason, TraceRecord};
