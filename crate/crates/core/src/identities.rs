//! Boundary normal-derivative identities of the flow, in the rotationally
//! symmetric reduction.
//!
//! With `a = R_nu nu`, `b` the tangential Ricci eigenvalue and `h = kappa g`
//! on the boundary sphere, smooth solutions satisfy for `t > 0`
//!
//! * `a_s = 2 kappa (2 b - a)`  (contracted normal derivative of `R_nu nu`),
//! * `b_s = kappa a`            (`nabla_nu R_ab = R_nu nu h_ab`),
//! * `R_s = 4 kappa b`          (normal derivative of the scalar curvature).
//!
//! None of these is imposed by the solver; they are measured.

use crate::error::{Error, Result};
use crate::flow::{run, FlowConfig, StopReason};
use crate::geometry::{curvature, BoundaryState, CurvatureField, WarpedMetric};
use crate::parallel::par_map;

/// Residuals of the three identities at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResiduals {
    /// `a_s - 2 kappa (2 b - a)`.
    pub i1: f64,
    /// `b_s - kappa a`.
    pub i2: f64,
    /// `r_s - 4 kappa b`.
    pub i3: f64,
    /// `max(|a|, |b|)^(3/2)` at the boundary.
    pub scale: f64,
    /// `[i1, i2, i3] / scale`.
    pub normalized: [f64; 3],
}

/// One-sided difference used for the outward derivatives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoundaryStencil {
    /// `(3 f_N - 4 f_{N-1} + f_{N-2}) / 2dx`.
    #[default]
    SecondOrder,
    /// `(f_N - f_{N-1}) / dx`; only useful to check the order fit.
    FirstOrder,
}

impl BoundaryStencil {
    fn apply(self, f: &[f64], dx: f64) -> f64 {
        let n = f.len() - 1;
        match self {
            BoundaryStencil::SecondOrder => (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * dx),
            BoundaryStencil::FirstOrder => (f[n] - f[n - 1]) / dx,
        }
    }
}

/// Boundary values of `a`, `b` and their outward arclength derivatives.
pub fn boundary_normal_derivatives(
    metric: &WarpedMetric,
    curv: &CurvatureField,
) -> Result<BoundaryState> {
    boundary_normal_derivatives_with(metric, curv, BoundaryStencil::SecondOrder)
}

pub fn boundary_normal_derivatives_with(
    metric: &WarpedMetric,
    curv: &CurvatureField,
    stencil: BoundaryStencil,
) -> Result<BoundaryState> {
    let grid = metric.grid();
    if curv.len() < 4 {
        return Err(Error::invalid(format!(
            "need at least 4 nodes for boundary derivatives, got {}",
            curv.len()
        )));
    }
    grid.check_len(curv.len())?;
    let n = grid.n_cells();
    let rho_b = metric.rho()[n];
    let a_s = stencil.apply(&curv.a, grid.dx()) / rho_b;
    let b_s = stencil.apply(&curv.b, grid.dx()) / rho_b;
    Ok(BoundaryState::new(
        curv.a[n],
        curv.b[n],
        metric.kappa(),
        a_s,
        b_s,
    ))
}

pub fn identity_residuals(state: &BoundaryState) -> IdentityResiduals {
    let BoundaryState {
        a_b,
        b_b,
        kappa,
        a_s,
        b_s,
        r_s,
        ..
    } = *state;
    let i1 = a_s - 2.0 * kappa * (2.0 * b_b - a_b);
    let i2 = b_s - kappa * a_b;
    let i3 = r_s - 4.0 * kappa * b_b;
    let scale = a_b.abs().max(b_b.abs()).powf(1.5);
    let normalized = if scale > 0.0 {
        [i1 / scale, i2 / scale, i3 / scale]
    } else {
        [i1, i2, i3]
    };
    IdentityResiduals {
        i1,
        i2,
        i3,
        scale,
        normalized,
    }
}

/// One row of an identity convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyRow {
    pub n_cells: usize,
    pub time: f64,
    pub residuals: IdentityResiduals,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityStudy {
    pub t_star: f64,
    pub rows: Vec<StudyRow>,
    /// Fitted order for `|i1n|`, `|i2n|`, `|i3n|`; `None` when the residuals
    /// are at round-off and no power law can be fitted.
    pub orders: [Option<f64>; 3],
}

/// Residuals below this (normalised) level are treated as round-off.
pub const ROUND_OFF_RESIDUAL: f64 = 1e-9;

/// Runs the configured flow on each grid to `t_star` and tabulates the
/// normalised residuals with a least-squares order fit.
pub fn identity_convergence_study(
    config: &FlowConfig,
    n_list: &[usize],
    t_star: f64,
) -> Result<IdentityStudy> {
    identity_convergence_study_with(config, n_list, t_star, BoundaryStencil::SecondOrder)
}

pub fn identity_convergence_study_with(
    config: &FlowConfig,
    n_list: &[usize],
    t_star: f64,
    stencil: BoundaryStencil,
) -> Result<IdentityStudy> {
    if n_list.len() < 2 || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(format!(
            "n_list must be strictly ascending with at least two entries, got {n_list:?}"
        )));
    }
    if !(t_star > 0.0) {
        return Err(Error::invalid(format!(
            "sample time must be positive, got {t_star}"
        )));
    }
    let results = par_map(n_list, |&n| -> Result<StudyRow> {
        let mut cfg = config.clone();
        cfg.n_cells = n;
        cfg.t_end = Some(t_star);
        cfg.record_every = usize::MAX;
        let trace = run(&cfg)?;
        if trace.stop_reason != StopReason::TEnd {
            return Err(Error::StudyAborted {
                n_cells: n,
                msg: format!(
                    "run stopped with `{}` at t = {} before t* = {t_star}{}",
                    trace.stop_reason,
                    trace.final_time(),
                    trace
                        .stop_detail
                        .map(|d| format!(" ({d})"))
                        .unwrap_or_default()
                ),
            });
        }
        let metric = trace.snapshots.last().expect("final snapshot");
        let curv = curvature(metric)?;
        let state = boundary_normal_derivatives_with(metric, &curv, stencil)?;
        Ok(StudyRow {
            n_cells: n,
            time: metric.time(),
            residuals: identity_residuals(&state),
        })
    });
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    let orders = std::array::from_fn(|k| {
        let ns: Vec<f64> = rows.iter().map(|r| r.n_cells as f64).collect();
        let res: Vec<f64> = rows
            .iter()
            .map(|r| r.residuals.normalized[k].abs())
            .collect();
        fitted_order(&ns, &res)
    });
    Ok(IdentityStudy {
        t_star,
        rows,
        orders,
    })
}

/// Convergence order `p` from a least-squares fit of `log err = c - p log n`.
/// `None` if any error is at round-off level.
pub fn fitted_order(ns: &[f64], errors: &[f64]) -> Option<f64> {
    if ns.len() < 2 || errors.iter().any(|e| !(*e > ROUND_OFF_RESIDUAL)) {
        return None;
    }
    let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    Some(-crate::pinching::least_squares(&xs, &ys).slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hemisphere_state_has_zero_residuals() {
        let r = identity_residuals(&BoundaryState::new(2.0, 2.0, 0.0, 0.0, 0.0));
        assert_eq!([r.i1, r.i2, r.i3], [0.0; 3]);
    }

    #[test]
    fn consistent_state_has_zero_residuals() {
        // 2 kappa (2b - a) = 3, kappa a = 0.5, 4 kappa b = 4.
        let s = BoundaryState::new(1.0, 2.0, 0.5, 3.0, 0.5);
        assert_eq!(s.r_s, 4.0);
        let r = identity_residuals(&s);
        assert_eq!([r.i1, r.i2, r.i3], [0.0; 3]);
    }

    #[test]
    fn zero_kappa_exposes_injected_violation() {
        let r = identity_residuals(&BoundaryState::new(1.0, 2.0, 0.0, 3.0, 0.0));
        assert_eq!(r.i1, 3.0);
        assert_eq!(r.i2, 0.0);
        assert_eq!(r.i3, 3.0);
        assert!((r.scale - 2.0_f64.powf(1.5)).abs() < 1e-15);
    }

    #[test]
    fn rejects_short_n_list() {
        let cfg = FlowConfig::new(crate::geometry::Preset::RoundCap { s_max: 1.0 });
        assert!(identity_convergence_study(&cfg, &[64], 0.01).is_err());
        assert!(identity_convergence_study(&cfg, &[64, 32], 0.01).is_err());
    }

    #[test]
    fn stencils_differentiate_a_quadratic_field() {
        use crate::geometry::{CurvatureField, Preset};
        let m = Preset::FlatBall { radius: 1.0 }.build(32).unwrap();
        let xs: Vec<f64> = m.grid().nodes().collect();
        let a: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let curv = CurvatureField::from_eigenvalues(a.clone(), a);
        let second = boundary_normal_derivatives(&m, &curv).unwrap();
        assert!((second.a_s - 2.0).abs() < 1e-12);
        assert!((second.r_s - (second.a_s + 2.0 * second.b_s)).abs() < 1e-12);
        let first =
            boundary_normal_derivatives_with(&m, &curv, BoundaryStencil::FirstOrder).unwrap();
        assert!((first.a_s - (2.0 - 1.0 / 32.0)).abs() < 1e-12);
    }

    #[test]
    fn round_cap_has_flat_boundary_derivatives() {
        use crate::geometry::{curvature, Preset};
        let m = Preset::RoundCap { s_max: 1.2 }.build(128).unwrap();
        let s = boundary_normal_derivatives(&m, &curvature(&m).unwrap()).unwrap();
        assert!(s.a_s.abs() < 1e-3 && s.b_s.abs() < 1e-3 && s.r_s.abs() < 3e-3);
    }

    #[test]
    fn fitted_order_of_power_laws() {
        let ns = [64.0, 128.0, 256.0];
        let errs: Vec<f64> = ns.iter().map(|n: &f64| 3.0 * n.powi(-2)).collect();
        assert!((fitted_order(&ns, &errs).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fitted_order(&ns, &[1e-3, 1e-12, 1e-4]), None);
        assert_eq!(fitted_order(&ns[..1], &errs[..1]), None);
    }
}
