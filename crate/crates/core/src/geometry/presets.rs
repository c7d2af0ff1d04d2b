use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{curvature, RadialGrid, WarpedMetric};

/// Initial data for the flow. Every cap has positive Ricci curvature and
/// realises its `kappa` exactly at `t = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Preset {
    /// Geodesic ball of radius `s_max` in the unit 3-sphere:
    /// `phi = sin s`, `kappa = cot(s_max)`.
    RoundCap { s_max: f64 },
    /// `phi = sin s (1 + amp sin^4(m s / 2))` on `[0, s_max]`.
    PerturbedCap { s_max: f64, amp: f64, mode: u32 },
    /// Cap of the ellipsoid `r^2 + z^2/aspect^2 = 1` in R^4 cut at polar
    /// angle `s_max`, parametrised by arclength; `aspect != 1` separates
    /// `a` from `b`.
    FlattenedCap { s_max: f64, aspect: f64 },
    /// Euclidean ball of the given radius (Ricci flat, `kappa = 1/radius`).
    FlatBall { radius: f64 },
}

impl Preset {
    pub const NAMES: [&'static str; 4] =
        ["round_cap", "perturbed_cap", "flattened_cap", "flat_ball"];

    /// Parses a preset from its name and a parameter map. Missing
    /// parameters take defaults (`s_max = pi/2`, `amp = 0.05`, `m = 2`,
    /// `aspect = 1.5`, `radius = 1`).
    pub fn from_params(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
        let allowed: &[&str] = match name {
            "round_cap" => &["s_max"],
            "perturbed_cap" => &["s_max", "amp", "m"],
            "flattened_cap" => &["s_max", "aspect"],
            "flat_ball" => &["radius"],
            other => return Err(Error::invalid(format!("unknown preset `{other}`"))),
        };
        if let Some(key) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::invalid(format!(
                "preset `{name}` has no parameter `{key}`"
            )));
        }
        let preset = match name {
            "round_cap" => Preset::RoundCap {
                s_max: get("s_max", FRAC_PI_2),
            },
            "perturbed_cap" => {
                let m = get("m", 2.0);
                if m < 1.0 || m.fract() != 0.0 {
                    return Err(Error::invalid(format!(
                        "mode m must be a positive integer, got {m}"
                    )));
                }
                Preset::PerturbedCap {
                    s_max: get("s_max", FRAC_PI_2),
                    amp: get("amp", 0.05),
                    mode: m as u32,
                }
            }
            "flattened_cap" => Preset::FlattenedCap {
                s_max: get("s_max", FRAC_PI_2),
                aspect: get("aspect", 1.5),
            },
            _ => Preset::FlatBall {
                radius: get("radius", 1.0),
            },
        };
        Ok(preset)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::RoundCap { .. } => "round_cap",
            Preset::PerturbedCap { .. } => "perturbed_cap",
            Preset::FlattenedCap { .. } => "flattened_cap",
            Preset::FlatBall { .. } => "flat_ball",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let pairs: Vec<(&str, f64)> = match *self {
            Preset::RoundCap { s_max } => vec![("s_max", s_max)],
            Preset::PerturbedCap { s_max, amp, mode } => {
                vec![("s_max", s_max), ("amp", amp), ("m", mode as f64)]
            }
            Preset::FlattenedCap { s_max, aspect } => vec![("s_max", s_max), ("aspect", aspect)],
            Preset::FlatBall { radius } => vec![("radius", radius)],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Whether the preset is required to have positive Ricci curvature.
    pub fn requires_positive_ricci(&self) -> bool {
        !matches!(self, Preset::FlatBall { .. })
    }

    /// Samples the preset on a grid with `n_cells` cells and screens it for
    /// positive Ricci curvature.
    pub fn build(&self, n_cells: usize) -> Result<WarpedMetric> {
        let grid = RadialGrid::new(n_cells)?;
        let metric = match *self {
            Preset::RoundCap { s_max } => {
                check_s_max(s_max)?;
                let kappa = realized_kappa(s_max.cos() / s_max.sin())?;
                WarpedMetric::from_profile(grid, kappa, |x| (s_max, (s_max * x).sin()))?
            }
            Preset::PerturbedCap { s_max, amp, mode } => {
                check_s_max(s_max)?;
                if !amp.is_finite() || amp.abs() >= 1.0 {
                    return Err(Error::invalid(format!(
                        "amp must satisfy |amp| < 1, got {amp}"
                    )));
                }
                let m = mode as f64;
                let bump = |s: f64| (0.5 * m * s).sin().powi(4);
                let bump_s = |s: f64| 2.0 * m * (0.5 * m * s).sin().powi(3) * (0.5 * m * s).cos();
                let profile = |s: f64| s.sin() * (1.0 + amp * bump(s));
                let slope = |s: f64| s.cos() * (1.0 + amp * bump(s)) + s.sin() * amp * bump_s(s);
                let kappa = realized_kappa(slope(s_max) / profile(s_max))?;
                let rho = |_: f64| s_max;
                let phi = |x: f64| profile(s_max * x);
                let fix = compatibility_correction(&rho, &phi, kappa);
                WarpedMetric::from_profile(grid, kappa, |x| (rho(x), phi(x) + fix(x)))?
            }
            Preset::FlattenedCap { s_max, aspect } => {
                check_s_max(s_max)?;
                if !(aspect > 0.0) || !aspect.is_finite() {
                    return Err(Error::invalid(format!(
                        "aspect must be positive, got {aspect}"
                    )));
                }
                let speed = |t: f64| (t.cos().powi(2) + (aspect * t.sin()).powi(2)).sqrt();
                let kappa = realized_kappa(s_max.cos() / (speed(s_max) * s_max.sin()))?;
                // Parametrise by arclength so rho is uniform.
                let length = arclength(&speed, s_max);
                let rho = |_: f64| length;
                let phi = |x: f64| polar_angle(&speed, x * length).sin();
                let fix = compatibility_correction(&rho, &phi, kappa);
                WarpedMetric::from_profile(grid, kappa, |x| (rho(x), phi(x) + fix(x)))?
            }
            Preset::FlatBall { radius } => {
                if !(radius > 0.0) || !radius.is_finite() {
                    return Err(Error::invalid(format!(
                        "radius must be positive, got {radius}"
                    )));
                }
                WarpedMetric::from_profile(grid, 1.0 / radius, |x| (radius, radius * x))?
            }
        };
        if self.requires_positive_ricci() {
            let curv = curvature(&metric)?;
            let bad = curv
                .a
                .iter()
                .zip(&curv.b)
                .position(|(a, b)| !(a.min(*b) > 0.0));
            if let Some(node) = bad {
                return Err(Error::PresetRejected {
                    preset: self.to_string(),
                    node,
                    a: curv.a[node],
                    b: curv.b[node],
                });
            }
        }
        Ok(metric)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name())?;
        let params = self.params();
        let mut first = true;
        for (k, v) in &params {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{k} = {v}")?;
        }
        write!(f, ")")
    }
}

/// Odd correction `c x^3 (x^2 - 1)^3` to `phi` that leaves `phi`, `phi_x`
/// and `phi_xx` at the boundary untouched but shifts `phi_xxx` there so
/// that `b_s = kappa a` holds at `t = 0`. The flow forces this relation for
/// every `t > 0`; starting from it avoids a corner layer at `x = 1`.
fn compatibility_correction(
    rho: &dyn Fn(f64) -> f64,
    phi: &dyn Fn(f64) -> f64,
    kappa: f64,
) -> impl Fn(f64) -> f64 {
    let [r, r_x, r_xx, _] = derivatives(rho, 1.0);
    let [p, p_x, p_xx, p_xxx] = derivatives(phi, 1.0);
    let p_s = p_x / r;
    let p_ss = p_xx / (r * r) - p_x * r_x / r.powi(3);
    let p_ss_x = p_xxx / (r * r) - 3.0 * p_xx * r_x / r.powi(3) - p_x * r_xx / r.powi(3)
        + 3.0 * p_x * r_x * r_x / r.powi(4);
    let p_s_x = p_xx / r - p_x * r_x / (r * r);
    let k_rad = -p_ss / p;
    let k_rad_x = -p_ss_x / p + p_ss * p_x / (p * p);
    let k_sph_x = -2.0 * p_s * p_s_x / (p * p) - 2.0 * (1.0 - p_s * p_s) * p_x / p.powi(3);
    let b_s = (k_rad_x + k_sph_x) / r;
    let a = 2.0 * k_rad;
    // The correction has phi_xxx(1) = 48 c and moves b_s by -phi_xxx / (rho^3 phi).
    let c = (b_s - kappa * a) * r.powi(3) * p / 48.0;
    move |x: f64| c * x.powi(3) * (x * x - 1.0).powi(3)
}

/// `int_0^theta speed` by composite Simpson.
fn arclength(speed: &dyn Fn(f64) -> f64, theta: f64) -> f64 {
    let panels = 512;
    let h = theta / panels as f64;
    let inner: f64 = (1..panels)
        .map(|k| if k % 2 == 1 { 4.0 } else { 2.0 } * speed(k as f64 * h))
        .sum();
    (speed(0.0) + inner + speed(theta)) * h / 3.0
}

/// Inverts [`arclength`] by Newton iteration.
fn polar_angle(speed: &dyn Fn(f64) -> f64, s: f64) -> f64 {
    let mut theta = s / speed(0.0);
    for _ in 0..50 {
        let step = (arclength(speed, theta) - s) / speed(theta);
        theta -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    theta
}

/// Value and first three derivatives of `f` at `x` from fourth-order
/// central differences.
fn derivatives(f: &dyn Fn(f64) -> f64, x: f64) -> [f64; 4] {
    let e = 1e-2;
    let v = |k: f64| f(x + k * e);
    let d1 = (v(-2.0) - 8.0 * v(-1.0) + 8.0 * v(1.0) - v(2.0)) / (12.0 * e);
    let d2 = (-v(-2.0) + 16.0 * v(-1.0) - 30.0 * v(0.0) + 16.0 * v(1.0) - v(2.0)) / (12.0 * e * e);
    let d3 = (v(-3.0) - 8.0 * v(-2.0) + 13.0 * v(-1.0) - 13.0 * v(1.0) + 8.0 * v(2.0) - v(3.0))
        / (8.0 * e.powi(3));
    [v(0.0), d1, d2, d3]
}

fn check_s_max(s_max: f64) -> Result<()> {
    if !(s_max > 0.0 && s_max < PI) {
        return Err(Error::invalid(format!(
            "s_max must lie in (0, pi), got {s_max}"
        )));
    }
    Ok(())
}

fn realized_kappa(kappa: f64) -> Result<f64> {
    // cot(pi/2) is ~6e-17 in floating point; treat that as totally geodesic.
    let kappa = if kappa.abs() < 1e-14 { 0.0 } else { kappa };
    if kappa < 0.0 {
        return Err(Error::invalid(format!(
            "preset boundary is concave (kappa = {kappa:.6}); kappa >= 0 requires s_max <= pi/2"
        )));
    }
    Ok(kappa)
}

/// Builds a named preset; see [`Preset::from_params`].
pub fn make_preset(
    name: &str,
    params: &BTreeMap<String, f64>,
    n_cells: usize,
) -> Result<WarpedMetric> {
    Preset::from_params(name, params)?.build(n_cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{boundary_normal_derivatives, identity_residuals};
    use crate::pinching::eps_pinch;
    use std::f64::consts::FRAC_PI_3;

    fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn round_cap_examples() {
        let hemi = make_preset("round_cap", &params(&[]), 64).unwrap();
        assert_eq!(hemi.kappa(), 0.0);
        let eps = eps_pinch(&curvature(&hemi).unwrap()).unwrap().0;
        assert!((eps - 1.0 / 3.0).abs() < 1e-6);
        let cap = make_preset("round_cap", &params(&[("s_max", FRAC_PI_3)]), 64).unwrap();
        assert!((cap.kappa() - 0.5774).abs() < 1e-4);
    }

    #[test]
    fn perturbed_cap_is_positive_and_less_pinched() {
        let m = make_preset("perturbed_cap", &params(&[("amp", 0.05), ("m", 2.0)]), 128).unwrap();
        let c = curvature(&m).unwrap();
        assert!(c.a.iter().zip(&c.b).all(|(a, b)| a.min(*b) > 0.0));
        let eps = eps_pinch(&c).unwrap().0;
        assert!(eps < 1.0 / 3.0 - 1e-3);
    }

    #[test]
    fn parameters_are_checked() {
        assert!(make_preset("torus", &params(&[]), 32).is_err());
        assert!(make_preset("round_cap", &params(&[("amp", 0.1)]), 32).is_err());
        assert!(make_preset("perturbed_cap", &params(&[("m", 1.5)]), 32).is_err());
        assert!(make_preset("perturbed_cap", &params(&[("amp", 1.0)]), 32).is_err());
        assert!(make_preset("flat_ball", &params(&[("radius", -1.0)]), 32).is_err());
        // s_max beyond pi/2 makes the boundary concave.
        assert!(make_preset("round_cap", &params(&[("s_max", 2.0)]), 32).is_err());
    }

    #[test]
    fn strongly_perturbed_cap_is_rejected() {
        let err = make_preset("perturbed_cap", &params(&[("amp", 0.9), ("m", 4.0)]), 64);
        assert!(matches!(err, Err(Error::PresetRejected { .. })), "{err:?}");
    }

    #[test]
    fn params_round_trip() {
        let presets = [
            Preset::RoundCap { s_max: 1.2 },
            Preset::PerturbedCap {
                s_max: 1.4,
                amp: 0.2,
                mode: 3,
            },
            Preset::FlattenedCap {
                s_max: 1.0,
                aspect: 1.3,
            },
            Preset::FlatBall { radius: 2.0 },
        ];
        for p in presets {
            assert_eq!(Preset::from_params(p.name(), &p.params()).unwrap(), p);
        }
        assert_eq!(
            Preset::FlattenedCap {
                s_max: 1.0,
                aspect: 1.3
            }
            .to_string(),
            "flattened_cap(aspect = 1.3, s_max = 1)"
        );
    }

    #[test]
    fn flat_ball_realizes_unit_sphere_boundary() {
        let m = Preset::FlatBall { radius: 2.0 }.build(32).unwrap();
        assert_eq!(m.kappa(), 0.5);
        assert!(curvature(&m).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn derivative_stencil_is_accurate() {
        let [v, d1, d2, d3] = derivatives(&|x: f64| x.sin(), 1.0);
        assert_eq!(v, 1.0_f64.sin());
        assert!((d1 - 1.0_f64.cos()).abs() < 1e-9);
        assert!((d2 + 1.0_f64.sin()).abs() < 1e-8);
        assert!((d3 + 1.0_f64.cos()).abs() < 1e-5);
    }

    #[test]
    fn arclength_of_a_circle() {
        let unit = |_: f64| 1.0;
        assert!((arclength(&unit, 1.3) - 1.3).abs() < 1e-14);
        let speed = |t: f64| (t.cos().powi(2) + (1.5 * t.sin()).powi(2)).sqrt();
        let theta = polar_angle(&speed, 0.8);
        assert!((arclength(&speed, theta) - 0.8).abs() < 1e-13);
    }

    #[test]
    fn flattened_cap_with_unit_aspect_matches_round_cap_at_the_boundary() {
        let round = Preset::RoundCap { s_max: 1.2 }.build(64).unwrap();
        let flat = Preset::FlattenedCap {
            s_max: 1.2,
            aspect: 1.0,
        }
        .build(64)
        .unwrap();
        assert!((round.kappa() - flat.kappa()).abs() < 1e-14);
        let mid = round.rho().len() / 2;
        assert!((round.rho()[mid] - flat.rho()[mid]).abs() < 1e-12);
        let last = round.phi().len() - 1;
        assert!((round.phi()[last] - flat.phi()[last]).abs() < 1e-12);
        assert!((round.phi()[0] - flat.phi()[0]).abs() < 1e-15);
    }

    #[test]
    fn corrected_presets_satisfy_the_compatibility_condition() {
        // An uncorrected cap with kappa > 0 has b_s = 0 but kappa a = 2 kappa.
        let cap = Preset::RoundCap { s_max: FRAC_PI_3 }.build(128).unwrap();
        let state = boundary_normal_derivatives(&cap, &curvature(&cap).unwrap()).unwrap();
        assert!(identity_residuals(&state).normalized[1].abs() > 0.4);
        let presets = [
            Preset::PerturbedCap {
                s_max: 1.4,
                amp: 0.2,
                mode: 2,
            },
            Preset::FlattenedCap {
                s_max: FRAC_PI_3,
                aspect: 1.3,
            },
        ];
        for p in presets {
            let i2 = |n| {
                let m = p.build(n).unwrap();
                let state = boundary_normal_derivatives(&m, &curvature(&m).unwrap()).unwrap();
                identity_residuals(&state).normalized[1].abs()
            };
            let (coarse, fine) = (i2(64), i2(128));
            assert!(fine < 5e-3, "{p}: {fine:e}");
            assert!(coarse / fine > 3.5, "{p}: {coarse:e} -> {fine:e}");
        }
    }
}
