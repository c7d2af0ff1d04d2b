use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::WarpedMetric;

/// Curvature of a warped-product metric at every node.
///
/// In the orthonormal frame `(d/ds, e_1, e_2)` the Ricci tensor is diagonal
/// with eigenvalue `a` in the radial direction and `b` (twice) along the
/// spheres.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureField {
    /// Sectional curvature of planes containing `d/ds`: `-phi_ss / phi`.
    pub k_rad: Vec<f64>,
    /// Sectional curvature of planes tangent to the spheres: `(1 - phi_s^2) / phi^2`.
    pub k_sph: Vec<f64>,
    /// Radial Ricci eigenvalue `2 k_rad`.
    pub a: Vec<f64>,
    /// Spherical Ricci eigenvalue `k_rad + k_sph` (multiplicity two).
    pub b: Vec<f64>,
    /// Scalar curvature `a + 2 b`.
    pub r_scalar: Vec<f64>,
    /// `|Ric|^2 = a^2 + 2 b^2`.
    pub s_norm: Vec<f64>,
}

impl CurvatureField {
    /// Fills the Ricci eigenvalues and their invariants from the two
    /// sectional curvatures.
    pub fn from_sectional(k_rad: Vec<f64>, k_sph: Vec<f64>) -> Self {
        let a: Vec<f64> = k_rad.iter().map(|k| 2.0 * k).collect();
        let b: Vec<f64> = k_rad.iter().zip(&k_sph).map(|(r, s)| r + s).collect();
        Self::from_eigenvalues_with_sectional(k_rad, k_sph, a, b)
    }

    /// Builds a field directly from Ricci eigenvalues `(a, b, b)`; the
    /// sectional curvatures are recovered as `k_rad = a/2`, `k_sph = b - a/2`.
    pub fn from_eigenvalues(a: Vec<f64>, b: Vec<f64>) -> Self {
        let k_rad: Vec<f64> = a.iter().map(|a| 0.5 * a).collect();
        let k_sph: Vec<f64> = a.iter().zip(&b).map(|(a, b)| b - 0.5 * a).collect();
        Self::from_eigenvalues_with_sectional(k_rad, k_sph, a, b)
    }

    fn from_eigenvalues_with_sectional(
        k_rad: Vec<f64>,
        k_sph: Vec<f64>,
        a: Vec<f64>,
        b: Vec<f64>,
    ) -> Self {
        let r_scalar = a.iter().zip(&b).map(|(a, b)| a + 2.0 * b).collect();
        let s_norm = a.iter().zip(&b).map(|(a, b)| a * a + 2.0 * b * b).collect();
        Self {
            k_rad,
            k_sph,
            a,
            b,
            r_scalar,
            s_norm,
        }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        self.r_scalar
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn r_min(&self) -> f64 {
        self.r_scalar.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Smallest Ricci eigenvalue over all nodes.
    pub fn ric_min(&self) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(a, b)| a.min(*b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest absolute value of any curvature quantity; used for the
    /// reaction cap of the time step.
    pub fn max_abs(&self) -> f64 {
        self.r_scalar
            .iter()
            .chain(&self.a)
            .chain(&self.b)
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `(max - min) / mean` over both sectional curvatures at all nodes.
    /// Scale invariant; zero exactly for constant curvature.
    pub fn spread(&self) -> f64 {
        let all = || self.k_rad.iter().chain(&self.k_sph).copied();
        let max = all().fold(f64::NEG_INFINITY, f64::max);
        let min = all().fold(f64::INFINITY, f64::min);
        let mean = all().sum::<f64>() / (2 * self.len()) as f64;
        if max == min {
            return 0.0;
        }
        (max - min) / mean.abs()
    }
}

/// Boundary-restricted curvature data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryState {
    /// `R_nu nu` at the boundary.
    pub a_b: f64,
    /// Tangential Ricci eigenvalue at the boundary.
    pub b_b: f64,
    pub kappa: f64,
    /// Mean curvature of the boundary sphere, `2 kappa`.
    pub mean_curvature: f64,
    /// Outward arclength derivatives at the boundary.
    pub a_s: f64,
    pub b_s: f64,
    pub r_s: f64,
}

impl BoundaryState {
    /// State with `H = 2 kappa` and `r_s = a_s + 2 b_s`.
    pub fn new(a_b: f64, b_b: f64, kappa: f64, a_s: f64, b_s: f64) -> Self {
        Self {
            a_b,
            b_b,
            kappa,
            mean_curvature: 2.0 * kappa,
            a_s,
            b_s,
            r_s: a_s + 2.0 * b_s,
        }
    }
}

/// `d/ds = (1/rho) d/dx` of a nodal field. Centred second-order differences
/// in the interior, one-sided second-order stencils at both ends.
pub fn arclength_derivative(metric: &WarpedMetric, field: &[f64]) -> Result<Vec<f64>> {
    let grid = metric.grid();
    grid.check_len(field.len())?;
    let n = grid.n_cells();
    let h2 = 2.0 * grid.dx();
    let rho = metric.rho();
    let mut out = Vec::with_capacity(field.len());
    out.push((-3.0 * field[0] + 4.0 * field[1] - field[2]) / h2 / rho[0]);
    for i in 1..n {
        out.push((field[i + 1] - field[i - 1]) / h2 / rho[i]);
    }
    out.push((3.0 * field[n] - 4.0 * field[n - 1] + field[n - 2]) / h2 / rho[n]);
    Ok(out)
}

/// Sectional curvatures and Ricci eigenvalues of the metric.
///
/// `k_rad = -phi_ss/phi` uses centred differences through the ghosts. The
/// spherical curvature is evaluated through the identity
/// `k_sph = k_rad + (W(0) - W) / phi^2` with `W = phi_s^2 - phi phi_ss`,
/// which equals `(1 - phi_s^2)/phi^2` whenever the metric closes smoothly
/// (`W(0) = phi_s(0)^2 = 1`). The discrete `W` uses the product
/// `phi_{i+1} phi_{i-1}`, so the quotient stays second-order accurate up to
/// the centre and is exact for round profiles. At the centre both sectional
/// curvatures take the common limit, extrapolated from nodes 1 and 2.
pub fn curvature(metric: &WarpedMetric) -> Result<CurvatureField> {
    let grid = metric.grid();
    let n = grid.n_cells();
    let h = grid.dx();
    let inv_h2 = 1.0 / (h * h);
    let rho = metric.rho();
    let phi = metric.phi();
    let ghosts = metric.ghosts();

    if let Some(i) = (1..=n).find(|&i| !(phi[i] > 0.0) || !phi[i].is_finite()) {
        return Err(Error::DegenerateMetric {
            node: i,
            value: phi[i],
        });
    }

    let mut k_rad = vec![0.0; n + 1];
    let mut w = vec![0.0; n + 1];
    // W at the centre: phi = 0 there and the ghost is -phi_1.
    w[0] = phi[1] * phi[1] * inv_h2 / (rho[0] * rho[0]);
    for i in 1..=n {
        let (pm, pp) = (
            phi[i - 1],
            if i < n { phi[i + 1] } else { ghosts.phi_outer },
        );
        let (rm, rp) = (
            rho[i - 1],
            if i < n { rho[i + 1] } else { ghosts.rho_outer },
        );
        let (p, r) = (phi[i], rho[i]);
        let phi_x = (pp - pm) * 0.5 / h;
        let phi_xx = (pp - 2.0 * p + pm) * inv_h2;
        let rho_x = (rp - rm) * 0.5 / h;
        let r2 = r * r;
        let phi_ss = phi_xx / r2 - phi_x * rho_x / (r2 * r);
        k_rad[i] = -phi_ss / p;
        w[i] = (p * p - pp * pm) * inv_h2 / r2 + p * phi_x * rho_x / (r2 * r);
    }

    let mut k_sph = vec![0.0; n + 1];
    for i in 1..=n {
        k_sph[i] = k_rad[i] + (w[0] - w[i]) / (phi[i] * phi[i]);
    }

    let extrapolate = |f: &[f64]| (4.0 * f[1] - f[2]) / 3.0;
    let k0 = 0.5 * (extrapolate(&k_rad) + extrapolate(&k_sph));
    k_rad[0] = k0;
    k_sph[0] = k0;

    Ok(CurvatureField::from_sectional(k_rad, k_sph))
}

/// Second fundamental form of the boundary sphere, `h = h_scalar g`, with
/// `h_scalar = phi_s(1)/phi(1)` from a one-sided second-order stencil, and
/// the mean curvature `H = 2 h_scalar`.
pub fn second_fundamental_form(metric: &WarpedMetric) -> Result<(f64, f64)> {
    let grid = metric.grid();
    let n = grid.n_cells();
    let phi = metric.phi();
    if !(phi[n] > 0.0) {
        return Err(Error::DegenerateBoundary(phi[n]));
    }
    let phi_x = (3.0 * phi[n] - 4.0 * phi[n - 1] + phi[n - 2]) / (2.0 * grid.dx());
    let h_scalar = phi_x / metric.rho()[n] / phi[n];
    Ok((h_scalar, 2.0 * h_scalar))
}

/// `4 pi int_0^1 rho phi^2 dx` by the composite trapezoid rule.
pub fn volume(metric: &WarpedMetric) -> f64 {
    4.0 * PI * trapezoid(metric, |r, p| r * p * p)
}

/// `4 pi int_0^1 f rho phi^2 dx` for a nodal field `f`.
pub(crate) fn integrate(metric: &WarpedMetric, f: &[f64]) -> f64 {
    let rho = metric.rho();
    let phi = metric.phi();
    let h = metric.grid().dx();
    let n = metric.grid().n_cells();
    let v = |i: usize| f[i] * rho[i] * phi[i] * phi[i];
    let inner: f64 = (1..n).map(v).sum();
    4.0 * PI * h * (inner + 0.5 * (v(0) + v(n)))
}

fn trapezoid(metric: &WarpedMetric, g: impl Fn(f64, f64) -> f64) -> f64 {
    let rho = metric.rho();
    let phi = metric.phi();
    let n = metric.grid().n_cells();
    let inner: f64 = (1..n).map(|i| g(rho[i], phi[i])).sum();
    metric.grid().dx() * (inner + 0.5 * (g(rho[0], phi[0]) + g(rho[n], phi[n])))
}

/// The metric `c^2 g` (lengths scaled by `c`): `rho -> c rho`,
/// `phi -> c phi`, `kappa -> kappa / c`; the time stamp is unchanged.
pub fn rescale(metric: &WarpedMetric, c: f64) -> Result<WarpedMetric> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::invalid(format!(
            "rescale factor must be positive, got {c}"
        )));
    }
    let mut out = metric.clone();
    out.scale_lengths(c);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Preset, RadialGrid};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn profile(n: usize, kappa: f64, f: impl Fn(f64) -> (f64, f64)) -> WarpedMetric {
        WarpedMetric::from_profile(RadialGrid::new(n).unwrap(), kappa, f).unwrap()
    }

    fn round_cap(n: usize, s_max: f64) -> WarpedMetric {
        Preset::RoundCap { s_max }.build(n).unwrap()
    }

    fn flat_ball(n: usize) -> WarpedMetric {
        profile(n, 1.0, |x| (1.0, x))
    }

    fn max_dev(v: &[f64], target: f64) -> f64 {
        v.iter().fold(0.0_f64, |m, x| m.max((x - target).abs()))
    }

    #[test]
    fn arclength_derivative_of_linear_field() {
        let m = flat_ball(16);
        let x: Vec<f64> = m.grid().nodes().collect();
        assert!(max_dev(&arclength_derivative(&m, &x).unwrap(), 1.0) < 1e-12);

        let m2 = profile(16, 0.5, |x| (2.0, 2.0 * x));
        assert!(max_dev(&arclength_derivative(&m2, &x).unwrap(), 0.5) < 1e-12);
    }

    #[test]
    fn arclength_derivative_of_quadratic_is_exact() {
        let m = flat_ball(64);
        let x2: Vec<f64> = m.grid().nodes().map(|x| x * x).collect();
        let d = arclength_derivative(&m, &x2).unwrap();
        for (i, x) in m.grid().nodes().enumerate() {
            assert!((d[i] - 2.0 * x).abs() < 1e-10, "node {i}");
        }
        assert!(arclength_derivative(&m, &x2[1..]).is_err());
    }

    #[test]
    fn round_cap_has_unit_sectional_curvature() {
        let c = curvature(&round_cap(256, FRAC_PI_2)).unwrap();
        for field in [&c.k_rad, &c.k_sph] {
            assert!(max_dev(field, 1.0) < 1e-4);
        }
        assert!(max_dev(&c.a, 2.0) < 1e-3);
        assert!(max_dev(&c.b, 2.0) < 1e-3);
        assert!(max_dev(&c.r_scalar, 6.0) < 3e-3);
        assert!(max_dev(&c.s_norm, 12.0) < 1e-2);
    }

    #[test]
    fn round_cap_converges_at_second_order() {
        for s_max in [FRAC_PI_3, FRAC_PI_2] {
            let err = |n| {
                let c = curvature(&round_cap(n, s_max)).unwrap();
                max_dev(&c.a, 2.0).max(max_dev(&c.b, 2.0))
            };
            let (coarse, fine) = (err(128), err(256));
            assert!(fine <= 1e-3);
            assert!(
                coarse / fine >= 3.5,
                "s_max = {s_max}: {coarse:e} -> {fine:e}"
            );
        }
    }

    #[test]
    fn flat_ball_is_flat() {
        let c = curvature(&flat_ball(32)).unwrap();
        for field in [&c.k_rad, &c.k_sph, &c.a, &c.b, &c.r_scalar, &c.s_norm] {
            assert!(max_dev(field, 0.0) < 1e-10);
        }
    }

    #[test]
    fn hyperbolic_cap_has_curvature_minus_one() {
        let s_max = 1.0_f64;
        let m = profile(256, 1.0 / s_max.tanh(), |x| (s_max, (s_max * x).sinh()));
        let c = curvature(&m).unwrap();
        assert!(max_dev(&c.k_rad, -1.0) < 1e-4);
        assert!(max_dev(&c.k_sph, -1.0) < 1e-4);
        assert!(max_dev(&c.r_scalar, -6.0) < 1e-3);
    }

    #[test]
    fn invariants_hold_exactly() {
        let m = profile(32, 0.3, |x| {
            (1.0 + 0.2 * x * x, (1.3 * x).sin() * (1.0 + 0.1 * x))
        });
        let c = curvature(&m).unwrap();
        for i in 0..c.len() {
            assert_eq!(c.r_scalar[i], c.a[i] + 2.0 * c.b[i]);
            assert_eq!(c.s_norm[i], c.a[i] * c.a[i] + 2.0 * c.b[i] * c.b[i]);
        }
        assert_eq!(c.k_rad[0], c.k_sph[0]);
    }

    #[test]
    fn boundary_state_invariants() {
        let s = BoundaryState::new(1.5, 2.5, 0.7, -0.3, 0.9);
        assert_eq!(s.mean_curvature, 1.4);
        assert_eq!(s.r_s, -0.3 + 2.0 * 0.9);
    }

    #[test]
    fn second_fundamental_form_examples() {
        let (h, mean) = second_fundamental_form(&round_cap(256, FRAC_PI_2)).unwrap();
        assert!(h.abs() < 1e-4);
        assert_eq!(mean, 2.0 * h);
        let (h, _) = second_fundamental_form(&round_cap(256, FRAC_PI_3)).unwrap();
        assert!((h - 1.0 / FRAC_PI_3.tan()).abs() < 1e-4);
        assert!((h - 0.5774).abs() < 1e-4);
        let (h, _) = second_fundamental_form(&flat_ball(64)).unwrap();
        assert!((h - 1.0).abs() < 1e-12);
    }

    #[test]
    fn volume_examples() {
        let hemi = volume(&round_cap(256, FRAC_PI_2));
        assert!((hemi - PI * PI).abs() < 1e-4 * PI * PI);
        let ball = volume(&flat_ball(256));
        assert!((ball - 4.0 * PI / 3.0).abs() < 1e-4);
        let coarse = (volume(&flat_ball(128)) - 4.0 * PI / 3.0).abs();
        assert!(coarse / (ball - 4.0 * PI / 3.0).abs() > 3.5);
    }

    #[test]
    fn rescale_examples() {
        let hemi = round_cap(64, FRAC_PI_2);
        assert_eq!(rescale(&hemi, 1.0).unwrap(), hemi);
        let big = rescale(&hemi, 2.0).unwrap();
        assert!((volume(&big) - 8.0 * volume(&hemi)).abs() < 1e-12 * volume(&big));
        assert_eq!(big.kappa(), 0.0);

        let cap = round_cap(64, FRAC_PI_3);
        let scaled = rescale(&cap, 2.0).unwrap();
        assert!((scaled.kappa() - 0.2887).abs() < 1e-4);
        let (h0, _) = second_fundamental_form(&cap).unwrap();
        let (h1, _) = second_fundamental_form(&scaled).unwrap();
        assert!((h1 - h0 / 2.0).abs() < 1e-8);
        assert!(rescale(&cap, 0.0).is_err());
        assert!(rescale(&cap, f64::NAN).is_err());
    }
}
