use crate::error::{Error, Result};
use crate::flow::{FlowConfig, FlowTrace, StopReason, TraceRecord};
use crate::geometry::{
    arclength_derivative, curvature, integrate, volume, CurvatureField, WarpedMetric,
};
use crate::identities::{boundary_normal_derivatives, identity_residuals};
use crate::pinching;

/// Right-hand side of the reduced flow: `g_xx = rho^2` and
/// `g_thth = phi^2` evolve by `-2 Ric`, i.e. `rho_t = -a rho` and
/// `phi_t = -b phi = phi_ss - (1 - phi_s^2)/phi`. The centre stays at
/// `phi = 0`.
pub fn ricci_rhs(metric: &WarpedMetric, curv: &CurvatureField) -> Result<(Vec<f64>, Vec<f64>)> {
    metric.grid().check_len(curv.len())?;
    let d_rho = metric
        .rho()
        .iter()
        .zip(&curv.a)
        .map(|(r, a)| -a * r)
        .collect();
    let mut d_phi: Vec<f64> = metric
        .phi()
        .iter()
        .zip(&curv.b)
        .map(|(p, b)| -b * p)
        .collect();
    d_phi[0] = 0.0;
    Ok((d_rho, d_phi))
}

/// Strength of the tangential gauge term in [`flow_rates`].
pub const GAUGE_STRENGTH: f64 = 1.5;

/// Rates of change from pulling the metric back along the tangential field
/// `V = xi d/dx` with `xi = alpha rho_x / rho^3`: `rho_t = (rho xi)_x` and
/// `phi_t = phi_x xi`. Together with the gauge condition `rho_x(1) = 0`
/// (held by the `rho` ghost) the field vanishes at both ends, so the
/// boundary sphere stays at `x = 1` and every geometric monitor is
/// unaffected. It also vanishes wherever `rho` is uniform, which keeps
/// round caps exact. The `rho` part is a diffusion that damps grid-scale
/// modes plain Ricci flow leaves neutral.
pub fn gauge_rates(metric: &WarpedMetric, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let n = metric.grid().n_cells();
    let h = metric.grid().dx();
    let (rho, phi) = (metric.rho(), metric.phi());
    let rho_at = |j: usize| {
        if j <= n {
            rho[j]
        } else {
            metric.ghosts().rho_outer
        }
    };
    // xi and rho xi at x_{j + 1/2}
    let (xi_half, flux): (Vec<f64>, Vec<f64>) = (0..=n)
        .map(|j| {
            let r = 0.5 * (rho_at(j) + rho_at(j + 1));
            let xi = alpha * (rho_at(j + 1) - rho_at(j)) / (h * r.powi(3));
            (xi, r * xi)
        })
        .unzip();
    let mut d_rho = vec![0.0; n + 1];
    let mut d_phi = vec![0.0; n + 1];
    for i in 1..=n {
        d_rho[i] = (flux[i] - flux[i - 1]) / h;
    }
    for i in 1..n {
        let xi = 0.5 * (xi_half[i - 1] + xi_half[i]);
        d_phi[i] = xi * (phi[i + 1] - phi[i - 1]) / (2.0 * h);
    }
    (d_rho, d_phi)
}

/// Full right-hand side integrated by [`step`]: [`ricci_rhs`] plus
/// [`gauge_rates`] at [`GAUGE_STRENGTH`].
pub fn flow_rates(metric: &WarpedMetric) -> Result<(Vec<f64>, Vec<f64>)> {
    let (mut d_rho, mut d_phi) = ricci_rhs(metric, &curvature(metric)?)?;
    let (g_rho, g_phi) = gauge_rates(metric, GAUGE_STRENGTH);
    d_rho.iter_mut().zip(&g_rho).for_each(|(d, g)| *d += g);
    d_phi.iter_mut().zip(&g_phi).for_each(|(d, g)| *d += g);
    Ok((d_rho, d_phi))
}

/// Returns a copy of the metric with parity ghosts at the centre, the Robin
/// ghost `phi_s(1) = kappa phi(1)` and the reflected `rho` ghost.
pub fn apply_boundary_conditions(metric: &WarpedMetric) -> WarpedMetric {
    let mut out = metric.clone();
    out.enforce_boundary_conditions();
    out
}

/// Explicit step size: `cfl_factor * min (rho dx)^2`, capped by
/// `0.1 / max |curvature|` so the reaction terms stay resolved.
pub fn cfl_dt(metric: &WarpedMetric, curv: &CurvatureField, cfl_factor: f64) -> f64 {
    let dx = metric.grid().dx();
    let min_rho = metric.rho().iter().copied().fold(f64::INFINITY, f64::min);
    let diffusive = cfl_factor * (min_rho * dx).powi(2);
    let max_curv = curv.max_abs();
    if max_curv > 0.0 {
        diffusive.min(0.1 / max_curv)
    } else {
        diffusive
    }
}

/// One classical RK4 step with the boundary conditions re-applied after
/// every stage. On failure the input metric is the last valid state.
pub fn step(metric: &WarpedMetric, dt: f64) -> Result<WarpedMetric> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid(format!(
            "step size must be positive, got {dt}"
        )));
    }
    let k1 = flow_rates(metric)?;
    let m2 = stage(metric, &[(&k1, 0.5 * dt)])?;
    let k2 = flow_rates(&m2)?;
    let m3 = stage(metric, &[(&k2, 0.5 * dt)])?;
    let k3 = flow_rates(&m3)?;
    let m4 = stage(metric, &[(&k3, dt)])?;
    let k4 = flow_rates(&m4)?;
    let w = dt / 6.0;
    let mut out = stage(
        metric,
        &[(&k1, w), (&k2, 2.0 * w), (&k3, 2.0 * w), (&k4, w)],
    )?;
    out.set_time(metric.time() + dt);
    Ok(out)
}

type Rates = (Vec<f64>, Vec<f64>);

fn stage(base: &WarpedMetric, terms: &[(&Rates, f64)]) -> Result<WarpedMetric> {
    let mut m = base.clone();
    {
        let (rho, phi) = m.nodes_mut();
        for ((d_rho, d_phi), w) in terms.iter().map(|(k, w)| (k, *w)) {
            rho.iter_mut().zip(d_rho).for_each(|(r, d)| *r += w * d);
            phi.iter_mut().zip(d_phi).for_each(|(p, d)| *p += w * d);
        }
        if let Some(i) = rho.iter().position(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::DegenerateMetric {
                node: i,
                value: rho[i],
            });
        }
        if let Some(i) = (1..phi.len()).find(|&i| !(phi[i] > 0.0) || !phi[i].is_finite()) {
            return Err(Error::DegenerateMetric {
                node: i,
                value: phi[i],
            });
        }
    }
    m.enforce_boundary_conditions();
    Ok(m)
}

/// Integrates the flow from the configured preset until `t_end`, until
/// `max R >= r_stop`, or until the metric degenerates. A degeneration
/// mid-run ends the trace with [`StopReason::Degenerate`] instead of an
/// error, keeping everything recorded so far.
pub fn run(config: &FlowConfig) -> Result<FlowTrace> {
    config.validate()?;
    run_from(config.preset.build(config.n_cells)?, config)
}

/// [`run`] from explicit initial data instead of the configured preset;
/// `config.n_cells` is replaced by the grid of `initial` and
/// `config.preset` is only carried into the trace.
pub fn run_from(initial: WarpedMetric, config: &FlowConfig) -> Result<FlowTrace> {
    config.validate()?;
    let config = &FlowConfig {
        n_cells: initial.grid().n_cells(),
        ..config.clone()
    };
    let mut metric = initial;
    let mut curv = curvature(&metric)?;
    if curv.r_max() >= config.r_stop {
        return Err(Error::invalid(format!(
            "r_stop = {} does not exceed the initial max R = {}",
            config.r_stop,
            curv.r_max()
        )));
    }
    let delta = match config.delta {
        Some(d) => d,
        None => pinching::eps_pinch(&curv)
            .map(|(eps, _)| pinching::default_delta(eps))
            .unwrap_or(0.1),
    };

    let mut records = Vec::new();
    let mut snapshots = Vec::new();
    let mut steps = 0usize;
    let mut last_dt = 0.0;
    let mut detail = None;

    let stop_reason = loop {
        let reason = if curv.r_max() >= config.r_stop {
            Some(StopReason::BlowUp)
        } else if config
            .t_end
            .is_some_and(|t| metric.time() >= t * (1.0 - 1e-14))
        {
            Some(StopReason::TEnd)
        } else if steps >= config.max_steps {
            Some(StopReason::StepLimit)
        } else {
            None
        };

        let mut dt = cfl_dt(&metric, &curv, config.cfl_factor);
        if let Some(t_end) = config.t_end {
            let remaining = t_end - metric.time();
            // Avoid leaving a sliver step at the end.
            if remaining < 1.5 * dt && remaining > 0.0 {
                dt = if remaining > dt {
                    0.5 * remaining
                } else {
                    remaining
                };
            }
        }

        if reason.is_some() || steps.is_multiple_of(config.record_every) {
            let shown_dt = if reason.is_some() { last_dt } else { dt };
            records.push(record(&metric, &curv, steps, shown_dt, delta)?);
            snapshots.push(metric.clone());
        }
        if let Some(reason) = reason {
            break reason;
        }

        let next = match step(&metric, dt).and_then(|m| {
            let residual = m.boundary_residual();
            if residual > config.boundary_tol {
                return Err(Error::invalid(format!(
                    "boundary residual {residual:e} exceeds {:e}",
                    config.boundary_tol
                )));
            }
            let c = curvature(&m)?;
            Ok((m, c))
        }) {
            Ok(next) => next,
            Err(e) => {
                detail = Some(e.to_string());
                if records.last().map(|r| r.step) != Some(steps) {
                    records.push(record(&metric, &curv, steps, last_dt, delta)?);
                    snapshots.push(metric.clone());
                }
                break StopReason::Degenerate;
            }
        };
        metric = next.0;
        curv = next.1;
        last_dt = dt;
        steps += 1;
    };

    Ok(FlowTrace {
        config: config.clone(),
        delta,
        records,
        snapshots,
        stop_reason,
        stop_detail: detail,
    })
}

/// Evaluates every monitor on one state.
pub(crate) fn record(
    metric: &WarpedMetric,
    curv: &CurvatureField,
    step: usize,
    dt: f64,
    delta: f64,
) -> Result<TraceRecord> {
    let nan = f64::NAN;
    let (eps_star, f_max, f_delta_max) = match pinching::eps_pinch(curv) {
        Ok((eps, _)) => (
            eps,
            pinching::f_ratio(curv)?.0,
            pinching::f_delta(curv, delta)?.0,
        ),
        Err(_) => (nan, nan, nan),
    };
    let anisotropy_max = curv
        .s_norm
        .iter()
        .zip(&curv.r_scalar)
        .map(|(s, r)| s - r * r / 3.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let state = boundary_normal_derivatives(metric, curv)?;
    let res = identity_residuals(&state);
    let h_margin = pinching::h_condition_margin(&state).unwrap_or(nan);
    let d_rad = arclength_derivative(metric, &curv.k_rad)?;
    let d_sph = arclength_derivative(metric, &curv.k_sph)?;
    let max_abs = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    Ok(TraceRecord {
        step,
        time: metric.time(),
        dt,
        r_max: curv.r_max(),
        r_min: curv.r_min(),
        ric_min: curv.ric_min(),
        volume: volume(metric),
        total_scalar: integrate(metric, &curv.r_scalar),
        eps_star,
        f_max,
        f_delta_max,
        anisotropy_max,
        i1n: res.normalized[0],
        i2n: res.normalized[1],
        i3n: res.normalized[2],
        h_margin,
        kappa: metric.kappa(),
        rm_max: max_abs(&curv.k_rad).max(max_abs(&curv.k_sph)),
        drm_max: max_abs(&d_rad).max(max_abs(&d_sph)),
        spread: curv.spread(),
        origin_drift: metric.origin_drift(),
        boundary_residual: metric.boundary_residual(),
    })
}
