//! Verdicts over a persisted run.
//!
//! Every verdict carries the measured value, the tolerance it was held to
//! and the range of trace rows it was computed from. Properties that follow
//! from the theory of the flow are labelled `theory-derived property`;
//! checks against closed forms, numerical hygiene and observed behaviour
//! are labelled `regression target`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{FlowConfig, StopReason, GAUGE_STRENGTH};
use crate::geometry::{curvature, Preset, WarpedMetric};
use crate::harness::config::{parse_config, HarnessConfig};
use crate::harness::io::{PersistedRun, TraceRow};
use crate::parallel::par_map;
use crate::pinching::{
    delta_pinch_fit_series, gradient_proxies, gradient_ratio_series, least_squares, DeltaFit,
};

/// Slack allowed on the preserved-cone monitors.
pub const CONE_SLACK: f64 = 1e-3;
/// Pinching levels below which the cone is known to be preserved.
pub const EPS_PRESERVED_BELOW: f64 = 0.25;
/// Relative tolerance of the closed-form hemisphere checks.
pub const EXACT_TOL: f64 = 0.01;
/// Hemisphere normalized-flow stationarity tolerance.
pub const STATIONARY_TOL: f64 = 1e-6;
/// Largest accepted slope of the anisotropy against `R_max`.
pub const DELTA_SLOPE_MAX: f64 = 2.0 - 0.01;
/// Accepted deviation from the `i3 = i1 + 2 i2` relation.
pub const IDENTITY_ALGEBRA_TOL: f64 = 1e-12;
/// Accepted `|i2n|` when `kappa = 0`.
pub const KAPPA_ZERO_I2_TOL: f64 = 1e-6;
/// Curvature level treated as zero for the flat ball.
pub const FLAT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    #[serde(rename = "theory-derived property")]
    TheoryDerived,
    #[serde(rename = "regression target")]
    Regression,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    InsufficientRange,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub kind: VerdictKind,
    pub status: Status,
    pub measured: Option<f64>,
    pub tolerance: Option<f64>,
    /// First and last trace row (0-based) the verdict was computed from.
    pub records: (usize, usize),
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Configuration echo, exactly as persisted.
    pub config: String,
    pub preset: Preset,
    pub n_cells: usize,
    pub dx: f64,
    pub kappa: f64,
    pub delta: f64,
    pub gauge_strength: f64,
    pub crate_version: String,
    /// Defaults of this build: `n_cells`, `cfl`, `r_stop`, `record_every`.
    pub defaults: (usize, f64, f64, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub stop_reason: StopReason,
    pub stop_detail: Option<String>,
    pub final_time: f64,
    pub rows: usize,
    /// `false` when any verdict failed.
    pub passed: bool,
    pub verdicts: Vec<Verdict>,
    pub provenance: Provenance,
}

impl RunReport {
    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.status == Status::Fail)
    }
}

/// Per-snapshot quantities the CSV does not carry.
#[derive(Clone)]
struct SnapshotMonitors {
    row: usize,
    r_max: f64,
    anisotropy: f64,
    rm: f64,
    drm: f64,
    origin_drift: f64,
}

fn snapshot_monitors(row: usize, m: &WarpedMetric) -> Result<SnapshotMonitors> {
    let curv = curvature(m)?;
    let anisotropy = curv
        .s_norm
        .iter()
        .zip(&curv.r_scalar)
        .map(|(s, r)| s - r * r / 3.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let (rm, drm) = gradient_proxies(m)?;
    Ok(SnapshotMonitors {
        row,
        r_max: curv.r_max(),
        anisotropy,
        rm,
        drm,
        origin_drift: m.origin_drift(),
    })
}

/// Builds the report of a run. The result depends only on the persisted
/// data, so regenerating it from disk reproduces it exactly.
pub fn build_report(run: &PersistedRun) -> Result<RunReport> {
    let cfg = parse_config(&run.config_text)?;
    let rows = &run.rows;
    if rows.is_empty() {
        return Err(Error::Schema {
            file: run.dir.join(super::io::TRACE_FILE).display().to_string(),
            msg: "trace has no rows".into(),
        });
    }
    let Some((_, last_snap)) = run.snapshots.last() else {
        return Err(Error::Schema {
            file: run.dir.join(super::io::META_FILE).display().to_string(),
            msg: "no snapshots listed".into(),
        });
    };
    let kappa = last_snap.kappa();

    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = run.snapshots.len().div_ceil(workers).max(1);
    let chunks: Vec<&[(usize, WarpedMetric)]> = run.snapshots.chunks(chunk).collect();
    let snaps = par_map(&chunks, |c| {
        c.iter()
            .map(|(row, m)| snapshot_monitors(*row, m))
            .collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?
    .concat();

    let ctx = Context {
        cfg: &cfg,
        rows,
        snaps: &snaps,
        kappa,
        stop: run.meta.stop_reason,
        stop_detail: run.meta.stop_detail.as_deref(),
    };
    let verdicts = ctx.verdicts();
    let defaults = FlowConfig::new(cfg.flow.preset);
    Ok(RunReport {
        stop_reason: run.meta.stop_reason,
        stop_detail: run.meta.stop_detail.clone(),
        final_time: rows[rows.len() - 1].t,
        rows: rows.len(),
        passed: verdicts.iter().all(|v| v.status != Status::Fail),
        verdicts,
        provenance: Provenance {
            config: run.config_text.clone(),
            preset: cfg.flow.preset,
            n_cells: cfg.flow.n_cells,
            dx: 1.0 / cfg.flow.n_cells as f64,
            kappa,
            delta: run.meta.delta,
            gauge_strength: GAUGE_STRENGTH,
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            defaults: (
                defaults.n_cells,
                defaults.cfl_factor,
                defaults.r_stop,
                defaults.record_every,
            ),
        },
    })
}

struct Context<'a> {
    cfg: &'a HarnessConfig,
    rows: &'a [TraceRow],
    snaps: &'a [SnapshotMonitors],
    kappa: f64,
    stop: StopReason,
    stop_detail: Option<&'a str>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn verdict(
    name: &str,
    kind: VerdictKind,
    ok: bool,
    measured: f64,
    tolerance: Option<f64>,
    records: (usize, usize),
    detail: String,
) -> Verdict {
    Verdict {
        name: name.to_string(),
        kind,
        status: if ok { Status::Pass } else { Status::Fail },
        measured: finite(measured),
        tolerance,
        records,
        detail,
    }
}

fn skipped(name: &str, kind: VerdictKind, status: Status, detail: &str) -> Verdict {
    Verdict {
        name: name.to_string(),
        kind,
        status,
        measured: None,
        tolerance: None,
        records: (0, 0),
        detail: detail.to_string(),
    }
}

/// Index and value of the largest (or smallest) entry; NaN entries make
/// the result NaN.
fn extreme(values: impl Iterator<Item = f64>, largest: bool) -> (usize, f64) {
    let mut best = (
        0,
        if largest {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        },
    );
    for (i, v) in values.enumerate() {
        if v.is_nan() {
            return (i, f64::NAN);
        }
        if (largest && v > best.1) || (!largest && v < best.1) {
            best = (i, v);
        }
    }
    best
}

use Status::{InsufficientRange, NotApplicable};
use VerdictKind::{Regression, TheoryDerived};

impl Context<'_> {
    fn last(&self) -> usize {
        self.rows.len() - 1
    }

    fn all(&self) -> (usize, usize) {
        (0, self.last())
    }

    fn preset(&self) -> Preset {
        self.cfg.flow.preset
    }

    fn hemisphere(&self) -> bool {
        matches!(self.preset(), Preset::RoundCap { .. }) && self.kappa == 0.0
    }

    fn positive(&self) -> bool {
        self.preset().requires_positive_ricci()
    }

    fn final_third(&self) -> (usize, usize) {
        (2 * self.rows.len() / 3, self.last())
    }

    fn verdicts(&self) -> Vec<Verdict> {
        let mut out = vec![
            self.run_completed(),
            self.exact_solution(),
            self.blow_up_time(),
            self.normalized_stationary(),
            self.blow_up(),
            self.positivity(),
            self.eps_pinching(),
            self.f_bound(),
            self.identity_consistency(),
            self.identity_kappa_zero(),
            self.delta_pinch(),
        ];
        out.extend(self.gradient_constants());
        out.extend([
            self.normalized_decay(),
            self.kappa_tilde_decreasing(),
            self.stationary(),
            self.volume_decreasing(),
            self.origin_regularity(),
        ]);
        out
    }

    fn run_completed(&self) -> Verdict {
        let ok = matches!(self.stop, StopReason::BlowUp | StopReason::TEnd);
        let detail = match self.stop_detail {
            Some(d) => format!("stopped with `{}`: {d}", self.stop),
            None => format!("stopped with `{}`", self.stop),
        };
        verdict(
            "run_completed",
            Regression,
            ok,
            self.rows[self.last()].t,
            None,
            self.all(),
            detail,
        )
    }

    fn exact_solution(&self) -> Verdict {
        const NAME: &str = "exact_solution";
        if !self.hemisphere() {
            return skipped(
                NAME,
                Regression,
                NotApplicable,
                "only the hemisphere has a closed form",
            );
        }
        let window: Vec<usize> = (0..self.rows.len())
            .filter(|&i| self.rows[i].t <= 0.2)
            .collect();
        let (worst_at, worst) = extreme(
            window.iter().map(|&i| {
                let r = &self.rows[i];
                let exact = 6.0 / (1.0 - 4.0 * r.t);
                (r.r_max - exact).abs() / exact
            }),
            true,
        );
        let records = (window[0], window[window.len() - 1]);
        verdict(
            NAME,
            Regression,
            worst <= EXACT_TOL,
            worst,
            Some(EXACT_TOL),
            records,
            format!(
                "largest relative deviation of R_max from 6/(1-4t) for t <= 0.2, at row {}",
                window[worst_at]
            ),
        )
    }

    fn blow_up_time(&self) -> Verdict {
        const NAME: &str = "blow_up_time";
        if !self.hemisphere() {
            return skipped(
                NAME,
                Regression,
                NotApplicable,
                "only the hemisphere has a closed form",
            );
        }
        if self.stop != StopReason::BlowUp {
            return skipped(
                NAME,
                Regression,
                InsufficientRange,
                "the run did not reach r_stop",
            );
        }
        // The closed form reaches r_stop at T (1 - 6/r_stop).
        let r_stop = self.cfg.flow.r_stop;
        if 6.0 / r_stop > EXACT_TOL {
            return skipped(
                NAME,
                Regression,
                InsufficientRange,
                &format!(
                    "r_stop = {r_stop} ends the exact solution more than {EXACT_TOL} before T = 1/4"
                ),
            );
        }
        let t = self.rows[self.last()].t;
        let err = (t - 0.25).abs() / 0.25;
        verdict(
            NAME,
            Regression,
            err <= EXACT_TOL,
            err,
            Some(EXACT_TOL),
            (self.last(), self.last()),
            format!("stop time {t} against T = 1/4 (relative deviation)"),
        )
    }

    fn normalized_stationary(&self) -> Verdict {
        const NAME: &str = "normalized_stationary";
        if !self.hemisphere() {
            return skipped(
                NAME,
                Regression,
                NotApplicable,
                "only the hemisphere is a normalized fixed point",
            );
        }
        if !self.cfg.monitor_normalized {
            return skipped(
                NAME,
                Regression,
                NotApplicable,
                "normalized monitors are disabled",
            );
        }
        let (_, worst) = extreme(
            self.rows
                .iter()
                .map(|r| r.spread_norm.abs().max(r.kappa_tilde.abs())),
            true,
        );
        verdict(
            NAME,
            Regression,
            worst <= STATIONARY_TOL,
            worst,
            Some(STATIONARY_TOL),
            self.all(),
            "largest normalized curvature spread or |kappa_tilde|".into(),
        )
    }

    fn blow_up(&self) -> Verdict {
        const NAME: &str = "blow_up";
        if !self.positive() {
            return skipped(
                NAME,
                TheoryDerived,
                NotApplicable,
                "initial data without positive Ricci curvature",
            );
        }
        let t = self.rows[self.last()].t;
        match self.stop {
            StopReason::BlowUp => verdict(
                NAME,
                TheoryDerived,
                true,
                t,
                None,
                self.all(),
                format!("R_max reached r_stop = {} at t = {t}", self.cfg.flow.r_stop),
            ),
            StopReason::TEnd => skipped(
                NAME,
                TheoryDerived,
                InsufficientRange,
                "the run ended at t_end before r_stop",
            ),
            other => verdict(
                NAME,
                TheoryDerived,
                false,
                t,
                None,
                self.all(),
                format!("run stopped with `{other}` before r_stop"),
            ),
        }
    }

    fn positivity(&self) -> Verdict {
        const NAME: &str = "positivity";
        if !self.positive() {
            return skipped(
                NAME,
                TheoryDerived,
                NotApplicable,
                "initial data without positive Ricci curvature",
            );
        }
        let (at, worst) = extreme(self.rows.iter().map(|r| r.ric_min / r.r_max), false);
        verdict(
            NAME,
            TheoryDerived,
            worst >= -CONE_SLACK,
            worst,
            Some(-CONE_SLACK),
            self.all(),
            format!("smallest ric_min / R_max (at row {at}); must stay above the tolerance"),
        )
    }

    fn eps_pinching(&self) -> Verdict {
        const NAME: &str = "eps_pinching";
        let eps0 = self.rows[0].eps_star;
        if !self.positive() || !(eps0 > 0.0) {
            return skipped(
                NAME,
                TheoryDerived,
                NotApplicable,
                "initial data is not pinched",
            );
        }
        let eps = self.cfg.epsilon.unwrap_or(eps0);
        if eps > eps0 {
            return skipped(
                NAME,
                TheoryDerived,
                NotApplicable,
                &format!(
                    "initial data is only {eps0}-pinched, below the configured epsilon = {eps}"
                ),
            );
        }
        let (at, worst) = extreme(self.rows.iter().map(|r| r.eps_star - eps), false);
        let v = verdict(
            NAME,
            TheoryDerived,
            worst >= -CONE_SLACK,
            worst,
            Some(-CONE_SLACK),
            self.all(),
            format!("smallest eps_star(t) - {eps} (at row {at}); must stay above the tolerance"),
        );
        if eps < EPS_PRESERVED_BELOW {
            return v;
        }
        Verdict {
            status: NotApplicable,
            detail: format!(
                "{}; preservation is only known for eps < {EPS_PRESERVED_BELOW}, so it is not claimed",
                v.detail
            ),
            ..v
        }
    }

    fn f_bound(&self) -> Verdict {
        const NAME: &str = "f_bound";
        let f0 = self.rows[0].f_max;
        if !self.positive() || !f0.is_finite() {
            return skipped(
                NAME,
                TheoryDerived,
                NotApplicable,
                "f is undefined for this initial data",
            );
        }
        let bound = (f0 + 0.02).max(0.9);
        let (at, worst) = extreme(self.rows.iter().map(|r| r.f_max), true);
        verdict(
            NAME,
            TheoryDerived,
            worst <= bound,
            worst,
            Some(bound),
            self.all(),
            format!("largest f_max (at row {at}) against max(f_max(0) + 0.02, 0.9)"),
        )
    }

    fn identity_consistency(&self) -> Verdict {
        const NAME: &str = "identity_consistency";
        if !self.cfg.monitor_identities {
            return skipped(
                NAME,
                Regression,
                NotApplicable,
                "identity monitors are disabled",
            );
        }
        let (at, worst) = extreme(
            self.rows
                .iter()
                .map(|r| (r.i3n - (r.i1n + 2.0 * r.i2n)).abs()),
            true,
        );
        verdict(
            NAME,
            Regression,
            worst <= IDENTITY_ALGEBRA_TOL,
            worst,
            Some(IDENTITY_ALGEBRA_TOL),
            self.all(),
            format!("largest |i3n - (i1n + 2 i2n)| (at row {at})"),
        )
    }

    fn identity_kappa_zero(&self) -> Verdict {
        const NAME: &str = "identity_kappa_zero";
        if self.kappa != 0.0 {
            return skipped(NAME, TheoryDerived, NotApplicable, "kappa > 0");
        }
        if !self.cfg.monitor_identities {
            return skipped(
                NAME,
                TheoryDerived,
                NotApplicable,
                "identity monitors are disabled",
            );
        }
        let (at, worst) = extreme(self.rows.iter().map(|r| r.i2n.abs()), true);
        verdict(
            NAME,
            TheoryDerived,
            worst <= KAPPA_ZERO_I2_TOL,
            worst,
            Some(KAPPA_ZERO_I2_TOL),
            self.all(),
            format!("largest |i2n| (at row {at}) with a totally geodesic boundary"),
        )
    }

    fn delta_pinch(&self) -> Verdict {
        const NAME: &str = "delta_pinch";
        if !self.positive() {
            return skipped(
                NAME,
                TheoryDerived,
                NotApplicable,
                "initial data without positive Ricci curvature",
            );
        }
        let r: Vec<f64> = self.snaps.iter().map(|s| s.r_max).collect();
        let y: Vec<f64> = self.snaps.iter().map(|s| s.anisotropy).collect();
        let rows = |w: (usize, usize)| (self.snaps[w.0].row, self.snaps[w.1].row);
        match delta_pinch_fit_series(&r, &y) {
            Ok(DeltaFit::IdenticallyZero { window }) => verdict(
                NAME,
                TheoryDerived,
                true,
                0.0,
                Some(DELTA_SLOPE_MAX),
                rows(window),
                "S - R^2/3 vanishes identically over the fit window".into(),
            ),
            Ok(DeltaFit::Fitted {
                slope,
                ci95,
                window,
                ..
            }) => verdict(
                NAME,
                TheoryDerived,
                slope <= DELTA_SLOPE_MAX,
                slope,
                Some(DELTA_SLOPE_MAX),
                rows(window),
                format!("slope of log max(S - R^2/3) against log R_max, 95% half-width {ci95:.3e}"),
            ),
            Err(Error::FitWindow(msg)) => Verdict {
                records: (self.snaps[0].row, self.snaps[self.snaps.len() - 1].row),
                ..skipped(NAME, TheoryDerived, InsufficientRange, &msg)
            },
            Err(e) => Verdict {
                records: (self.snaps[0].row, self.snaps[self.snaps.len() - 1].row),
                ..skipped(NAME, TheoryDerived, Status::Fail, &e.to_string())
            },
        }
    }

    fn gradient_constants(&self) -> Vec<Verdict> {
        let rm: Vec<f64> = self.snaps.iter().map(|s| s.rm).collect();
        let drm: Vec<f64> = self.snaps.iter().map(|s| s.drm).collect();
        let records = (self.snaps[0].row, self.snaps[self.snaps.len() - 1].row);
        gradient_ratio_series(&rm, &drm, &self.cfg.thetas)
            .into_iter()
            .map(|c| {
                verdict(
                    &format!("gradient_constant_theta_{}", c.theta),
                    Regression,
                    c.c_cubic.is_finite(),
                    c.c_cubic,
                    None,
                    records,
                    format!(
                        "C(theta) with the cubic power; the 3/2-power variant gives {:.6e}",
                        c.c_three_halves
                    ),
                )
            })
            .collect()
    }

    fn normalized_decay(&self) -> Verdict {
        const NAME: &str = "normalized_decay";
        if let Some(v) = self.normalized_guard(NAME) {
            return v;
        }
        let (a, b) = self.final_third();
        let win = &self.rows[a..=b];
        if win.iter().any(|r| !(r.spread_norm > 0.0)) {
            return Verdict {
                records: (a, b),
                ..skipped(
                    NAME,
                    TheoryDerived,
                    Status::Fail,
                    "normalized spread is not positive",
                )
            };
        }
        let xs: Vec<f64> = win.iter().map(|r| r.t_tilde).collect();
        let ys: Vec<f64> = win.iter().map(|r| r.spread_norm.ln()).collect();
        let slope = least_squares(&xs, &ys).slope;
        let monotone = win.windows(2).all(|w| w[1].spread_norm < w[0].spread_norm);
        verdict(
            NAME,
            TheoryDerived,
            slope < 0.0 && monotone,
            slope,
            Some(0.0),
            (a, b),
            format!(
                "slope of log spread_norm against t_tilde over the final third; spread {} monotone there",
                if monotone { "is" } else { "is not" }
            ),
        )
    }

    fn kappa_tilde_decreasing(&self) -> Verdict {
        const NAME: &str = "kappa_tilde_decreasing";
        if let Some(v) = self.normalized_guard(NAME) {
            return v;
        }
        let (a, b) = self.final_third();
        let (at, worst) = extreme(
            self.rows[a..=b]
                .windows(2)
                .map(|w| w[1].kappa_tilde - w[0].kappa_tilde),
            true,
        );
        verdict(
            NAME,
            TheoryDerived,
            worst < 0.0,
            worst,
            Some(0.0),
            (a, b),
            format!(
                "largest increment of kappa_tilde over the final third (after row {})",
                a + at
            ),
        )
    }

    fn normalized_guard(&self, name: &str) -> Option<Verdict> {
        if self.kappa == 0.0 || !self.positive() {
            return Some(skipped(
                name,
                TheoryDerived,
                NotApplicable,
                "needs positive Ricci curvature and kappa > 0",
            ));
        }
        if !self.cfg.monitor_normalized {
            return Some(skipped(
                name,
                TheoryDerived,
                NotApplicable,
                "normalized monitors are disabled",
            ));
        }
        if self.rows.len() < 9 {
            return Some(skipped(
                name,
                TheoryDerived,
                InsufficientRange,
                "fewer than 9 records",
            ));
        }
        None
    }

    fn stationary(&self) -> Verdict {
        const NAME: &str = "stationary";
        if self.positive() {
            return skipped(
                NAME,
                Regression,
                NotApplicable,
                "only the flat ball is stationary",
            );
        }
        let (at, worst) = extreme(
            self.rows
                .iter()
                .map(|r| r.r_max.abs().max(r.r_min.abs()).max(r.ric_min.abs())),
            true,
        );
        verdict(
            NAME,
            Regression,
            worst <= FLAT_TOL,
            worst,
            Some(FLAT_TOL),
            self.all(),
            format!("largest curvature magnitude (at row {at})"),
        )
    }

    fn volume_decreasing(&self) -> Verdict {
        const NAME: &str = "volume_decreasing";
        if !self.positive() {
            return skipped(
                NAME,
                Regression,
                NotApplicable,
                "initial data without positive Ricci curvature",
            );
        }
        if self.rows.len() < 2 {
            return skipped(NAME, Regression, InsufficientRange, "a single record");
        }
        let (at, worst) = extreme(
            self.rows.windows(2).map(|w| w[1].volume - w[0].volume),
            true,
        );
        verdict(
            NAME,
            Regression,
            worst < 0.0,
            worst,
            Some(0.0),
            self.all(),
            format!("largest volume increment between records (after row {at})"),
        )
    }

    fn origin_regularity(&self) -> Verdict {
        let (at, worst) = extreme(self.snaps.iter().map(|s| s.origin_drift), true);
        verdict(
            "origin_regularity",
            Regression,
            worst <= self.cfg.flow.origin_tol,
            worst,
            Some(self.cfg.flow.origin_tol),
            (self.snaps[0].row, self.snaps[self.snaps.len() - 1].row),
            format!(
                "largest |phi_s(0) - 1| over snapshots (at row {})",
                self.snaps[at].row
            ),
        )
    }
}
