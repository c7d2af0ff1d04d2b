use crate::error::{Error, Result};
use crate::geometry::RadialGrid;

/// Values one cell outside each end of the grid, used by the centred
/// stencils at `x = 0` and `x = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Ghosts {
    pub rho_origin: f64,
    pub phi_origin: f64,
    pub rho_outer: f64,
    pub phi_outer: f64,
}

/// Rotationally symmetric metric `rho^2 dx^2 + phi^2 g_S2` on the 3-ball,
/// sampled on a [`RadialGrid`], together with the boundary umbilicity
/// constant `kappa` (second fundamental form `h = kappa g`) and the flow time.
///
/// Ghost values are kept consistent with the nodal data: every constructor
/// and every mutation through this type re-applies the boundary conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct WarpedMetric {
    grid: RadialGrid,
    rho: Vec<f64>,
    phi: Vec<f64>,
    kappa: f64,
    time: f64,
    ghosts: Ghosts,
}

impl WarpedMetric {
    /// Builds a metric from nodal values; `phi[0]` is forced to zero and the
    /// boundary conditions are applied.
    pub fn new(
        grid: RadialGrid,
        rho: Vec<f64>,
        mut phi: Vec<f64>,
        kappa: f64,
        time: f64,
    ) -> Result<Self> {
        grid.check_len(rho.len())?;
        grid.check_len(phi.len())?;
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::invalid(format!(
                "kappa must be finite and >= 0, got {kappa}"
            )));
        }
        if let Some(i) = rho.iter().position(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::invalid(format!(
                "rho[{i}] = {} is not positive",
                rho[i]
            )));
        }
        phi[0] = 0.0;
        if let Some(i) = (1..phi.len()).find(|&i| !(phi[i] > 0.0) || !phi[i].is_finite()) {
            return Err(Error::DegenerateMetric {
                node: i,
                value: phi[i],
            });
        }
        let mut metric = Self {
            grid,
            rho,
            phi,
            kappa,
            time,
            ghosts: Ghosts::default(),
        };
        metric.enforce_boundary_conditions();
        Ok(metric)
    }

    /// Samples `profile(x) = (rho, phi)` at the grid nodes.
    pub fn from_profile<F>(grid: RadialGrid, kappa: f64, profile: F) -> Result<Self>
    where
        F: Fn(f64) -> (f64, f64),
    {
        let (rho, phi): (Vec<f64>, Vec<f64>) = grid.nodes().map(profile).unzip();
        Self::new(grid, rho, phi, kappa, 0.0)
    }

    pub fn grid(&self) -> RadialGrid {
        self.grid
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn ghosts(&self) -> Ghosts {
        self.ghosts
    }

    pub(crate) fn set_time(&mut self, time: f64) {
        self.time = time;
    }

    pub(crate) fn nodes_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.rho, &mut self.phi)
    }

    pub(crate) fn scale_lengths(&mut self, c: f64) {
        self.rho.iter_mut().for_each(|r| *r *= c);
        self.phi.iter_mut().for_each(|p| *p *= c);
        self.kappa /= c;
        self.enforce_boundary_conditions();
    }

    /// Sets the ghost values:
    ///
    /// * origin: parity (`rho` even, `phi` odd), `phi_0 = 0`, and the
    ///   regularity condition `rho_0 = phi_x(0)` (near the centre `rho` is
    ///   transported outward, so its central value is an inflow condition
    ///   fixed by smooth closing rather than an evolved unknown);
    /// * boundary: `phi` ghost from the Robin condition `phi_s = kappa phi`,
    ///   `rho` ghost by reflection, which imposes `rho_x(1) = 0`.
    pub fn enforce_boundary_conditions(&mut self) {
        let n = self.grid.n_cells();
        let h = self.grid.dx();
        self.phi[0] = 0.0;
        self.rho[0] = self.origin_phi_x();
        self.ghosts.rho_origin = self.rho[1];
        self.ghosts.phi_origin = -self.phi[1];

        // Centred slope minus dx^2 phi_xxx / 6, with phi_xxx from a
        // second-order stencil through the ghost. The ghost then matches the
        // smooth extension to O(dx^5), so the boundary node sees the same
        // truncation error as the interior.
        let slope = self.kappa * self.rho[n] * self.phi[n];
        let p = &self.phi;
        self.ghosts.phi_outer =
            (12.0 * h * slope - 10.0 * p[n] + 18.0 * p[n - 1] - 6.0 * p[n - 2] + p[n - 3]) / 3.0;
        // Gauge condition rho_x(1) = 0.
        self.ghosts.rho_outer = self.rho[n - 1];
    }

    /// `phi_x(0)` from `phi_1 / dx` with a sinusoidal correction
    /// (`cos(theta) = phi_2 / 2 phi_1`); fourth-order for odd profiles and
    /// exact for `sin`/`sinh`.
    fn origin_phi_x(&self) -> f64 {
        let h = self.grid.dx();
        let (p1, p2) = (self.phi[1], self.phi[2]);
        let c = (p2 / (2.0 * p1)).clamp(0.0, 1.5);
        p1 / h / sinc_from_cos(c)
    }

    /// `phi_s(1)` as seen by the boundary stencil: the centred difference
    /// through the ghost minus `dx^2 phi_xxx / 6`.
    pub fn boundary_slope(&self) -> f64 {
        let n = self.grid.n_cells();
        let h = self.grid.dx();
        let (g, p) = (self.ghosts.phi_outer, &self.phi);
        let centred = (g - p[n - 1]) / (2.0 * h);
        let third =
            (1.5 * g - 5.0 * p[n] + 6.0 * p[n - 1] - 3.0 * p[n - 2] + 0.5 * p[n - 3]) / h.powi(3);
        (centred - h * h * third / 6.0) / self.rho[n]
    }

    /// `|phi_s(1) - kappa phi(1)|`.
    pub fn boundary_residual(&self) -> f64 {
        let n = self.grid.n_cells();
        (self.boundary_slope() - self.kappa * self.phi[n]).abs()
    }

    /// `phi_s(0)`, with `phi_x(0)` taken from the fourth-order odd
    /// extrapolation `(8 phi_1 - phi_2) / (6 dx)`.
    pub fn origin_slope(&self) -> f64 {
        let h = self.grid.dx();
        (8.0 * self.phi[1] - self.phi[2]) / (6.0 * h) / self.rho[0]
    }

    /// `|phi_s(0) - 1|`; zero for a metric that closes smoothly at the centre.
    /// Measured with the polynomial extrapolation of [`Self::origin_slope`],
    /// independent of the estimator that sets `rho_0`.
    pub fn origin_drift(&self) -> f64 {
        (self.origin_slope() - 1.0).abs()
    }

    /// Arclength from the centre to each node, `s(x) = int_0^x rho dx`.
    pub fn arclength(&self) -> Vec<f64> {
        let h = self.grid.dx();
        let mut s = Vec::with_capacity(self.rho.len());
        s.push(0.0);
        for w in self.rho.windows(2) {
            let last = *s.last().unwrap();
            s.push(last + 0.5 * h * (w[0] + w[1]));
        }
        s
    }

    /// Checks the stored-state invariants with the given tolerances.
    pub fn validate(&self, origin_tol: f64, boundary_tol: f64) -> Result<()> {
        if let Some(i) = (1..self.phi.len()).find(|&i| !(self.phi[i] > 0.0)) {
            return Err(Error::DegenerateMetric {
                node: i,
                value: self.phi[i],
            });
        }
        if let Some(i) = self.rho.iter().position(|r| !(*r > 0.0)) {
            return Err(Error::invalid(format!(
                "rho[{i}] = {} is not positive",
                self.rho[i]
            )));
        }
        let drift = self.origin_drift();
        if drift > origin_tol {
            return Err(Error::invalid(format!(
                "origin regularity |phi_s(0) - 1| = {drift:e} exceeds {origin_tol:e}"
            )));
        }
        let res = self.boundary_residual();
        if res > boundary_tol {
            return Err(Error::invalid(format!(
                "boundary residual |phi_s(1) - kappa phi(1)| = {res:e} exceeds {boundary_tol:e}"
            )));
        }
        Ok(())
    }
}

/// `sin(theta)/theta` for `cos(theta) = c`, continued to `sinh(t)/t` when
/// `c > 1`.
pub(crate) fn sinc_from_cos(c: f64) -> f64 {
    let theta2 = if c <= 1.0 {
        let t = c.max(-1.0).acos();
        t * t
    } else {
        let t = c.acosh();
        -t * t
    };
    if theta2.abs() < 1e-4 {
        1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0 - theta2 * theta2 * theta2 / 5040.0
    } else if theta2 > 0.0 {
        let t = theta2.sqrt();
        t.sin() / t
    } else {
        let t = (-theta2).sqrt();
        t.sinh() / t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    fn cap(n: usize, s_max: f64) -> WarpedMetric {
        let grid = RadialGrid::new(n).unwrap();
        WarpedMetric::from_profile(grid, 1.0 / s_max.tan(), |x| (s_max, (s_max * x).sin())).unwrap()
    }

    #[test]
    fn sinc_branches_agree_near_zero() {
        for c in [1.0 - 1e-6, 1.0 - 1e-4, 1.0, 1.0 + 1e-6, 1.0 + 1e-4_f64] {
            let theta2: f64 = if c <= 1.0 {
                c.acos().powi(2)
            } else {
                -c.acosh().powi(2)
            };
            let exact = if theta2 > 0.0 {
                theta2.sqrt().sin() / theta2.sqrt()
            } else if theta2 < 0.0 {
                (-theta2).sqrt().sinh() / (-theta2).sqrt()
            } else {
                1.0
            };
            assert!((sinc_from_cos(c) - exact).abs() < 1e-12, "c = {c}");
        }
    }

    #[test]
    fn robin_ghost_reproduces_analytic_cap() {
        let m = cap(64, FRAC_PI_3);
        let h = m.grid().dx();
        let exact = (FRAC_PI_3 * (1.0 + h)).sin();
        assert!((m.ghosts().phi_outer - exact).abs() < 1e-8);
        assert!(m.boundary_residual() < 1e-12);
    }

    #[test]
    fn origin_parity() {
        let m = cap(32, 1.0);
        let g = m.ghosts();
        assert_eq!(g.phi_origin, -m.phi()[1]);
        assert_eq!(g.rho_origin, m.rho()[1]);
        let fine = cap(64, 1.0);
        assert!(m.origin_drift() < 1e-5);
        assert!(m.origin_drift() > 12.0 * fine.origin_drift());
    }

    #[test]
    fn rejects_bad_inputs() {
        let grid = RadialGrid::new(16).unwrap();
        let ok = vec![1.0; 17];
        assert!(matches!(
            WarpedMetric::new(grid, ok.clone(), vec![1.0; 16], 0.0, 0.0),
            Err(Error::GridMismatch { .. })
        ));
        assert!(WarpedMetric::new(grid, ok.clone(), ok.clone(), -0.1, 0.0).is_err());
        let mut phi = ok.clone();
        phi[5] = 0.0;
        assert!(matches!(
            WarpedMetric::new(grid, ok, phi, 0.0, 0.0),
            Err(Error::DegenerateMetric { node: 5, .. })
        ));
    }
}
