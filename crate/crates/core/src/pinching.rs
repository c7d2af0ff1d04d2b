//! Ricci pinching functionals.
//!
//! Interior nodes carry the Ricci eigenvalues `(a, b, b)`. At the boundary
//! these are `nu = R_nu nu = a` and the tangential pair `lam = mu = b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowTrace;
use crate::geometry::{
    arclength_derivative, curvature, BoundaryState, CurvatureField, WarpedMetric,
};

/// Ricci eigenvalues at a boundary point: tangential `mu <= lam`, normal `nu`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenTriple {
    pub lam: f64,
    pub mu: f64,
    pub nu: f64,
}

impl EigenTriple {
    pub fn new(lam: f64, mu: f64, nu: f64) -> Self {
        Self { lam, mu, nu }
    }

    /// Rotationally symmetric boundary triple `(b, b, a)`.
    pub fn from_boundary(state: &BoundaryState) -> Self {
        Self::new(state.b_b, state.b_b, state.a_b)
    }

    pub fn scalar(&self) -> f64 {
        self.lam + self.mu + self.nu
    }

    pub fn norm_sq(&self) -> f64 {
        self.lam * self.lam + self.mu * self.mu + self.nu * self.nu
    }

    fn positive_scalar(&self) -> Result<f64> {
        let r = self.scalar();
        if !(r > 0.0) {
            return Err(Error::invalid(format!(
                "eigenvalue sum {r} must be positive for {self:?}"
            )));
        }
        Ok(r)
    }
}

fn check_positive_scalar(curv: &CurvatureField) -> Result<()> {
    match curv.r_scalar.iter().position(|r| !(*r > 0.0)) {
        Some(node) => Err(Error::PinchingUndefined {
            node,
            r: curv.r_scalar[node],
        }),
        None => Ok(()),
    }
}

fn arg_extremum(
    values: impl Iterator<Item = f64>,
    better: impl Fn(f64, f64) -> bool,
) -> (f64, usize) {
    values
        .enumerate()
        .fold((f64::NAN, 0), |(best, at), (i, v)| {
            if best.is_nan() || better(v, best) {
                (v, i)
            } else {
                (best, at)
            }
        })
}

/// Largest `eps` with `Ric >= eps R g` everywhere:
/// `min_i min(a_i, b_i) / R_i`, with the node where it is attained.
pub fn eps_pinch(curv: &CurvatureField) -> Result<(f64, usize)> {
    check_positive_scalar(curv)?;
    let ratios = curv
        .a
        .iter()
        .zip(&curv.b)
        .zip(&curv.r_scalar)
        .map(|((a, b), r)| a.min(*b) / r);
    Ok(arg_extremum(ratios, |v, best| v < best))
}

/// `max_i S_i / R_i^2` with `S = a^2 + 2 b^2`; equals `1/3` exactly when
/// the eigenvalues agree.
pub fn f_ratio(curv: &CurvatureField) -> Result<(f64, usize)> {
    check_positive_scalar(curv)?;
    let f = curv
        .s_norm
        .iter()
        .zip(&curv.r_scalar)
        .map(|(s, r)| s / (r * r));
    Ok(arg_extremum(f, |v, best| v > best))
}

/// `max_i S/R^gamma - R^(gamma-2)/3` with `gamma = 2 - delta`.
pub fn f_delta(curv: &CurvatureField, delta: f64) -> Result<(f64, usize)> {
    check_delta(delta)?;
    check_positive_scalar(curv)?;
    let gamma = 2.0 - delta;
    let f = curv
        .s_norm
        .iter()
        .zip(&curv.r_scalar)
        .map(|(s, r)| s / r.powf(gamma) - r.powf(gamma - 2.0) / 3.0);
    Ok(arg_extremum(f, |v, best| v > best))
}

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&delta) {
        return Err(Error::invalid(format!(
            "delta must lie in [0, 0.5], got {delta}"
        )));
    }
    Ok(())
}

/// Default exponent gap for [`f_delta`]: `min(0.1, 2 eps^2)`.
pub fn default_delta(eps_star: f64) -> f64 {
    (2.0 * eps_star * eps_star).min(0.1)
}

/// The bracket `nu R [3(lam + mu) - 2 nu] - 2 (lam + mu) S` that fixes the
/// sign of the outward derivative of `S/R^2` at the boundary.
pub fn boundary_f_braces(e: &EigenTriple) -> f64 {
    let t = e.lam + e.mu;
    e.nu * e.scalar() * (3.0 * t - 2.0 * e.nu) - 2.0 * t * e.norm_sq()
}

/// `nabla_nu (S/R^2) = (2 kappa / R^3) * braces`.
pub fn boundary_f_normal_derivative(e: &EigenTriple, kappa: f64) -> Result<f64> {
    let r = e.positive_scalar()?;
    Ok(2.0 * kappa / r.powi(3) * boundary_f_braces(e))
}

/// Outward derivative of `S/R^gamma - R^(gamma-2)/3`, `gamma = 2 - delta`:
/// `2 kappa { nu[3(lam+mu) - 2nu]/R^gamma - gamma S (lam+mu)/R^(gamma+1)
///            + (delta/3) R^(gamma-3) (lam+mu) }`.
pub fn boundary_fdelta_normal_derivative(e: &EigenTriple, kappa: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let r = e.positive_scalar()?;
    let gamma = 2.0 - delta;
    let t = e.lam + e.mu;
    let braces = e.nu * (3.0 * t - 2.0 * e.nu) / r.powf(gamma)
        - gamma * e.norm_sq() * t / r.powf(gamma + 1.0)
        + delta / 3.0 * r.powf(gamma - 3.0) * t;
    Ok(2.0 * kappa * braces)
}

/// `h(x, y) = (x + y + 1)[3(x + y) - 2] - 2(x^2 + y^2 + 1)(x + y)`, the
/// boundary bracket divided by `nu^3` in the ratios `x, y`.
pub fn h_sign(x: f64, y: f64) -> f64 {
    let t = x + y;
    (t + 1.0) * (3.0 * t - 2.0) - 2.0 * (x * x + y * y + 1.0) * t
}

/// Constrained maximum of `h` on `x + y = eps`, attained at `x = y = eps/2`:
/// `-eps^3 + 3 eps^2 - eps - 2`.
pub fn h_diagonal_max(eps: f64) -> f64 {
    -eps.powi(3) + 3.0 * eps * eps - eps - 2.0
}

/// Largest `delta` with `R_nu nu >= delta g^ab R_ab` at the boundary:
/// `a_b / (2 b_b)`.
pub fn h_condition_margin(state: &BoundaryState) -> Result<f64> {
    if !(state.b_b > 0.0) {
        return Err(Error::invalid(format!(
            "tangential Ricci eigenvalue must be positive, got {}",
            state.b_b
        )));
    }
    Ok(state.a_b / (2.0 * state.b_b))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (zero for two points).
    pub slope_stderr: f64,
    pub n: usize,
}

/// Ordinary least squares `y = intercept + slope x`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len();
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = if n > 2 {
        let sse: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        (sse / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    LinearFit {
        slope,
        intercept,
        slope_stderr,
        n,
    }
}

/// Result of fitting `max(S - R^2/3) ~ C R_max^p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DeltaFit {
    /// `S - R^2/3` vanishes to round-off over the window (round metrics).
    IdenticallyZero { window: (usize, usize) },
    Fitted {
        slope: f64,
        intercept: f64,
        /// Half-width of the 95% confidence interval of the slope.
        ci95: f64,
        /// Record index range `[start, end]` used for the fit.
        window: (usize, usize),
    },
}

/// Required growth of `R_max` over a trace before fitting.
pub const DELTA_FIT_RANGE: f64 = 100.0;

/// Power-law fit of `max(S - R^2/3)` against `R_max` over the records whose
/// `R_max` lies within the last two decades of growth.
pub fn delta_pinch_fit(trace: &FlowTrace) -> Result<DeltaFit> {
    let r: Vec<f64> = trace.records.iter().map(|r| r.r_max).collect();
    let y: Vec<f64> = trace.records.iter().map(|r| r.anisotropy_max).collect();
    delta_pinch_fit_series(&r, &y)
}

pub fn delta_pinch_fit_series(r_max: &[f64], anisotropy: &[f64]) -> Result<DeltaFit> {
    if r_max.len() != anisotropy.len() || r_max.is_empty() {
        return Err(Error::FitWindow(
            "series are empty or of unequal length".into(),
        ));
    }
    let r0 = r_max[0];
    let r_end = *r_max.last().unwrap();
    if !(r0 > 0.0) || r_end < DELTA_FIT_RANGE * r0 {
        return Err(Error::FitWindow(format!(
            "R_max grew from {r0:.4e} to {r_end:.4e}; need a factor of {DELTA_FIT_RANGE}"
        )));
    }
    let threshold = r_end / DELTA_FIT_RANGE;
    let start = r_max.iter().position(|r| *r >= threshold).unwrap();
    let end = r_max.len() - 1;
    let window = (start, end);
    let idx = start..=end;
    if idx
        .clone()
        .all(|i| anisotropy[i].abs() <= 1e-10 * r_max[i] * r_max[i])
    {
        return Ok(DeltaFit::IdenticallyZero { window });
    }
    if let Some(i) = idx.clone().find(|&i| !(anisotropy[i] > 0.0)) {
        return Err(Error::FitWindow(format!(
            "S - R^2/3 = {:e} is not positive at record {i}",
            anisotropy[i]
        )));
    }
    if end - start < 2 {
        return Err(Error::FitWindow(format!(
            "only {} records in the fit window",
            end - start + 1
        )));
    }
    let xs: Vec<f64> = idx.clone().map(|i| r_max[i].ln()).collect();
    let ys: Vec<f64> = idx.map(|i| anisotropy[i].ln()).collect();
    let fit = least_squares(&xs, &ys);
    Ok(DeltaFit::Fitted {
        slope: fit.slope,
        intercept: fit.intercept,
        ci95: 1.96 * fit.slope_stderr,
        window,
    })
}

/// `C(theta)` for the gradient estimate in its displayed (cubic) form and in
/// the classical `3/2`-power form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientConstant {
    pub theta: f64,
    /// `max_tau [max_{t<=tau}|DRm| - theta (max_{t<=tau}|Rm|)^3]`, clamped at 0.
    pub c_cubic: f64,
    /// Same with exponent `3/2`.
    pub c_three_halves: f64,
}

/// `(|Rm|, |DRm|)` proxies of one state: the largest sectional curvature and
/// the largest arclength derivative of a sectional curvature.
pub fn gradient_proxies(metric: &WarpedMetric) -> Result<(f64, f64)> {
    let curv = curvature(metric)?;
    let max_abs = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let rm = max_abs(&curv.k_rad).max(max_abs(&curv.k_sph));
    let d_rad = arclength_derivative(metric, &curv.k_rad)?;
    let d_sph = arclength_derivative(metric, &curv.k_sph)?;
    Ok((rm, max_abs(&d_rad).max(max_abs(&d_sph))))
}

/// Gradient-ratio constants over the snapshots of a trace.
pub fn gradient_ratio(trace: &FlowTrace, thetas: &[f64]) -> Result<Vec<GradientConstant>> {
    let proxies = trace
        .snapshots
        .iter()
        .map(gradient_proxies)
        .collect::<Result<Vec<_>>>()?;
    let (rm, drm): (Vec<f64>, Vec<f64>) = proxies.into_iter().unzip();
    Ok(gradient_ratio_series(&rm, &drm, thetas))
}

pub fn gradient_ratio_series(rm: &[f64], drm: &[f64], thetas: &[f64]) -> Vec<GradientConstant> {
    let constant = |theta: f64, power: f64| {
        let mut run_rm = 0.0_f64;
        let mut run_drm = 0.0_f64;
        let mut c = 0.0_f64;
        for (r, d) in rm.iter().zip(drm) {
            run_rm = run_rm.max(*r);
            run_drm = run_drm.max(*d);
            c = c.max(run_drm - theta * run_rm.powf(power));
        }
        c
    };
    thetas
        .iter()
        .map(|&theta| GradientConstant {
            theta,
            c_cubic: constant(theta, 3.0),
            c_three_halves: constant(theta, 1.5),
        })
        .collect()
}

/// Pinching summary of a whole run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinchingReport {
    /// Smallest `eps_star` over the run and the record where it occurs.
    pub eps_star: f64,
    pub eps_star_record: usize,
    pub eps_star_initial: f64,
    /// Largest `f = S/R^2` over the run and where it occurs.
    pub f_max: f64,
    pub f_max_record: usize,
    pub f_max_node: usize,
    pub delta: f64,
    pub f_delta_max: f64,
    /// Smallest H-condition margin `a_b/(2 b_b)` over the run.
    pub h_condition_margin: f64,
    pub delta_fit: Option<DeltaFit>,
    pub delta_fit_error: Option<String>,
    pub grad_constants: Vec<GradientConstant>,
}

pub fn pinching_report(trace: &FlowTrace, thetas: &[f64]) -> Result<PinchingReport> {
    let recs = &trace.records;
    let (eps_star, eps_star_record) = arg_extremum(recs.iter().map(|r| r.eps_star), |v, b| v < b);
    let (f_max, f_max_record) = arg_extremum(recs.iter().map(|r| r.f_max), |v, b| v > b);
    let f_max_node = f_ratio(&curvature(&trace.snapshots[f_max_record])?)
        .map(|(_, node)| node)
        .unwrap_or(0);
    let f_delta_max = recs
        .iter()
        .map(|r| r.f_delta_max)
        .fold(f64::NEG_INFINITY, f64::max);
    let h_condition_margin = recs
        .iter()
        .map(|r| r.h_margin)
        .fold(f64::INFINITY, f64::min);
    let (delta_fit, delta_fit_error) = match delta_pinch_fit(trace) {
        Ok(fit) => (Some(fit), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(PinchingReport {
        eps_star,
        eps_star_record,
        eps_star_initial: recs[0].eps_star,
        f_max,
        f_max_record,
        f_max_node,
        delta: trace.delta,
        f_delta_max,
        h_condition_margin,
        delta_fit,
        delta_fit_error,
        grad_constants: gradient_ratio(trace, thetas)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(a: f64, b: f64) -> CurvatureField {
        CurvatureField::from_eigenvalues(vec![a; 5], vec![b; 5])
    }

    #[test]
    fn eps_examples() {
        assert!((eps_pinch(&field(2.0, 2.0)).unwrap().0 - 1.0 / 3.0).abs() < 1e-15);
        assert!((eps_pinch(&field(1.0, 2.0)).unwrap().0 - 0.2).abs() < 1e-15);
        let (eps, _) = eps_pinch(&field(0.5, 2.0)).unwrap();
        assert!((eps - 1.0 / 9.0).abs() < 1e-15);
        assert!(eps < 0.25);
    }

    #[test]
    fn eps_reports_node() {
        let f = CurvatureField::from_eigenvalues(vec![2.0, 2.0, 1.0, 2.0], vec![2.0; 4]);
        assert_eq!(eps_pinch(&f).unwrap().1, 2);
    }

    #[test]
    fn pinching_undefined_for_nonpositive_scalar() {
        let f = CurvatureField::from_eigenvalues(vec![1.0, -4.0], vec![1.0, 1.0]);
        assert!(matches!(
            eps_pinch(&f),
            Err(Error::PinchingUndefined { node: 1, .. })
        ));
        assert!(f_ratio(&f).is_err());
        assert!(f_delta(&f, 0.1).is_err());
    }

    #[test]
    fn f_examples() {
        assert!((f_ratio(&field(2.0, 2.0)).unwrap().0 - 1.0 / 3.0).abs() < 1e-15);
        assert!((f_ratio(&field(0.0, 1.0)).unwrap().0 - 0.5).abs() < 1e-15);
        assert!((f_ratio(&field(1.0, 2.0)).unwrap().0 - 0.36).abs() < 1e-15);
    }

    #[test]
    fn f_delta_examples() {
        assert!(f_delta(&field(2.0, 2.0), 0.0).unwrap().0.abs() < 1e-15);
        let direct = 9.0 / 5f64.powf(1.9) - 5f64.powf(-0.1) / 3.0;
        let (v, _) = f_delta(&field(1.0, 2.0), 0.1).unwrap();
        assert!((v - direct).abs() < 1e-15);
        assert!((v - 0.139).abs() < 5e-4);
        assert!(f_delta(&field(1.0, 2.0), 0.6).is_err());
    }

    #[test]
    fn boundary_braces_examples() {
        assert_eq!(
            boundary_f_braces(&EigenTriple::new(1.0, 1.0, 10.0)),
            -2088.0
        );
        assert_eq!(
            boundary_f_braces(&EigenTriple::new(10.0, 10.0, 1.0)),
            -6822.0
        );
        for v in [0.5, 2.0, 7.0] {
            let e = EigenTriple::new(v, v, v);
            assert_eq!(boundary_f_normal_derivative(&e, 1.3).unwrap(), 0.0);
        }
        assert!(boundary_f_normal_derivative(&EigenTriple::new(1.0, -1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn fdelta_derivative_examples() {
        let round = EigenTriple::new(2.0, 2.0, 2.0);
        assert!(
            boundary_fdelta_normal_derivative(&round, 1.0, 0.0)
                .unwrap()
                .abs()
                < 1e-15
        );
        let e = EigenTriple::new(1.0, 1.0, 10.0);
        assert!(boundary_fdelta_normal_derivative(&e, 1.0, 0.01).unwrap() < 0.0);
        assert_eq!(
            boundary_fdelta_normal_derivative(&e, 0.0, 0.2).unwrap(),
            0.0
        );
        assert!(boundary_fdelta_normal_derivative(&e, 1.0, -0.1).is_err());
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_sign(1.0, 1.0), 0.0);
        assert_eq!(h_diagonal_max(0.0), -2.0);
        assert_eq!(h_diagonal_max(2.0), 0.0);
        assert_eq!(h_diagonal_max(4.0), -22.0);
        assert_eq!(h_sign(2.0, 2.0), -22.0);
    }

    #[test]
    fn h_condition_examples() {
        let hemi = BoundaryState::new(2.0, 2.0, 0.0, 0.0, 0.0);
        assert_eq!(h_condition_margin(&hemi).unwrap(), 0.5);
        let s = BoundaryState::new(1.0, 2.0, 0.3, 0.0, 0.0);
        assert_eq!(h_condition_margin(&s).unwrap(), 0.25);
        let bad = BoundaryState::new(1.0, 0.0, 0.3, 0.0, 0.0);
        assert!(h_condition_margin(&bad).is_err());
    }

    #[test]
    fn delta_fit_recovers_manufactured_slope() {
        let r: Vec<f64> = (0..200).map(|k| 5.0 * 1.03_f64.powi(k)).collect();
        let y: Vec<f64> = r.iter().map(|r| 0.7 * r.powf(1.9)).collect();
        match delta_pinch_fit_series(&r, &y).unwrap() {
            DeltaFit::Fitted { slope, window, .. } => {
                assert!((slope - 1.9).abs() < 1e-6);
                assert!(r[window.0] >= r[199] / 100.0);
                assert!(window.0 == 0 || r[window.0 - 1] < r[199] / 100.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn delta_fit_zero_and_range() {
        let r: Vec<f64> = (0..50).map(|k| 6.0 * 1.2_f64.powi(k)).collect();
        let zeros = vec![0.0; 50];
        assert!(matches!(
            delta_pinch_fit_series(&r, &zeros).unwrap(),
            DeltaFit::IdenticallyZero { .. }
        ));
        let short: Vec<f64> = (0..50).map(|k| 6.0 + k as f64).collect();
        assert!(matches!(
            delta_pinch_fit_series(&short, &vec![1.0; 50]),
            Err(Error::FitWindow(_))
        ));
    }

    #[test]
    fn gradient_constant_is_clamped_running_max() {
        let rm = [1.0, 1.0, 2.0];
        let drm = [0.5, 3.0, 1.0];
        let c = gradient_ratio_series(&rm, &drm, &[0.1]);
        // tau = 1: 3 - 0.1 = 2.9; tau = 2: 3 - 0.8 = 2.2.
        assert!((c[0].c_cubic - 2.9).abs() < 1e-15);
        let zero = gradient_ratio_series(&[1.0; 3], &[0.0; 3], &[0.05]);
        assert_eq!(zero[0].c_cubic, 0.0);
        assert_eq!(zero[0].c_three_halves, 0.0);
    }
}
