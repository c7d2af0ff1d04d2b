//! The five harness commands. Each returns its result instead of printing,
//! so the binary decides what to show and which exit status to use.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::flow::{normalize_trace, run, StopReason};
use crate::geometry::{curvature, Preset};
use crate::harness::config::{parse_config, serialize_config, HarnessConfig};
use crate::harness::io::{
    load_run, read_trace_csv, run_dir, snapshot_file_name, write_json, write_trace_csv,
    PersistedRun, RunMeta, Snapshot, SnapshotRef, TraceRow, CONFIG_FILE, META_FILE, REPORT_FILE,
    SNAPSHOT_DIR, TRACE_FILE,
};
use crate::harness::plot::plot_trace;
use crate::harness::report::{build_report, RunReport};
use crate::identities::{boundary_normal_derivatives, fitted_order, identity_residuals};
use crate::parallel::par_map;

pub const SOLUTION_STUDY_FILE: &str = "solution_error.csv";
pub const IDENTITY_STUDY_FILE: &str = "identity_residuals.csv";

/// Result of [`cmd_run`].
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub report: RunReport,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    /// Process exit status: nonzero when the run failed or a verdict failed.
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.report.passed)
    }
}

/// Runs the flow, writes the run directory and builds the report.
pub fn cmd_run(cfg: &HarnessConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    if !cfg.flow.preset.requires_positive_ricci() && cfg.flow.t_end.is_none() {
        return Err(Error::invalid(format!(
            "preset `{}` never reaches r_stop; set t_end",
            cfg.flow.preset.name()
        )));
    }
    let trace = run(&cfg.flow)?;
    let normalized = if cfg.monitor_normalized {
        Some(normalize_trace(&trace)?)
    } else {
        None
    };
    let rows: Vec<TraceRow> = trace
        .records
        .iter()
        .enumerate()
        .map(|(k, rec)| {
            let norm = normalized.as_ref().map(|n| &n.records[k]);
            TraceRow::new(rec, norm, cfg.monitor_identities)
        })
        .collect();

    let last = rows.len() - 1;
    let kept: Vec<usize> = (0..rows.len())
        .filter(|k| k % cfg.snapshot_every == 0 || *k == last)
        .collect();
    let config_text = serialize_config(cfg);
    let persisted = PersistedRun {
        dir: cfg.output_dir.clone(),
        config_text,
        rows,
        meta: RunMeta {
            stop_reason: trace.stop_reason,
            stop_detail: trace.stop_detail.clone(),
            delta: trace.delta,
            snapshots: kept
                .iter()
                .map(|&k| SnapshotRef {
                    record: k,
                    file: snapshot_file_name(k),
                })
                .collect(),
        },
        snapshots: kept
            .iter()
            .map(|&k| (k, trace.snapshots[k].clone()))
            .collect(),
    };
    let report = build_report(&persisted)?;

    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    let config_path = dir.join(CONFIG_FILE);
    fs::write(&config_path, &persisted.config_text).map_err(|e| Error::io(&config_path, e))?;
    files.push(config_path);
    if cfg.emit_csv {
        let path = dir.join(TRACE_FILE);
        write_trace_csv(&path, &persisted.rows)?;
        files.push(path);
    }
    if cfg.emit_json {
        let snap_dir = dir.join(SNAPSHOT_DIR);
        clear_snapshots(&snap_dir)?;
        fs::create_dir_all(&snap_dir).map_err(|e| Error::io(&snap_dir, e))?;
        for (k, m) in &persisted.snapshots {
            let path = dir.join(snapshot_file_name(*k));
            write_json(&path, &Snapshot::from_metric(m))?;
        }
        let meta = dir.join(META_FILE);
        write_json(&meta, &persisted.meta)?;
        let report_path = dir.join(REPORT_FILE);
        write_json(&report_path, &report)?;
        files.extend([snap_dir, meta, report_path]);
    }
    if cfg.emit_plots {
        files.extend(plot_trace(
            &persisted.rows,
            &dir.join("plots"),
            is_hemisphere(cfg),
        )?);
    }
    Ok(RunOutcome {
        dir: dir.clone(),
        report,
        files,
    })
}

/// Removes snapshot files left by an earlier run into the same directory.
fn clear_snapshots(dir: &Path) -> Result<()> {
    let Ok(entries) = fs::read_dir(dir) else {
        return Ok(());
    };
    for entry in entries.flatten() {
        let name = entry.file_name();
        let name = name.to_string_lossy();
        if name.starts_with("snapshot_") && name.ends_with(".json") {
            fs::remove_file(entry.path()).map_err(|e| Error::io(entry.path(), e))?;
        }
    }
    Ok(())
}

/// Round cap with a totally geodesic boundary, the one preset with a
/// closed-form evolution.
fn is_hemisphere(cfg: &HarnessConfig) -> bool {
    matches!(cfg.flow.preset, Preset::RoundCap { s_max } if (s_max.cos() / s_max.sin()).abs() < 1e-14)
}

/// Regenerates `report.json` from a run directory (or a file inside it).
pub fn cmd_report(path: &Path) -> Result<RunReport> {
    let persisted = load_run(path)?;
    let report = build_report(&persisted)?;
    write_json(&persisted.dir.join(REPORT_FILE), &report)?;
    Ok(report)
}

/// Result of [`cmd_plot`]; an empty trace yields no files and a warning.
#[derive(Clone, Debug, Default)]
pub struct PlotOutcome {
    pub files: Vec<PathBuf>,
    pub warning: Option<String>,
}

/// Writes plots of a run directory (or a file inside it) to `<dir>/plots`.
pub fn cmd_plot(path: &Path) -> Result<PlotOutcome> {
    let dir = run_dir(path);
    let config_path = dir.join(CONFIG_FILE);
    let text = fs::read_to_string(&config_path).map_err(|e| Error::io(&config_path, e))?;
    let cfg = parse_config(&text)?;
    let rows = read_trace_csv(&dir.join(TRACE_FILE))?;
    if rows.is_empty() {
        return Ok(PlotOutcome {
            files: Vec::new(),
            warning: Some(format!(
                "{} has no rows; nothing to plot",
                dir.join(TRACE_FILE).display()
            )),
        });
    }
    Ok(PlotOutcome {
        files: plot_trace(&rows, &dir.join("plots"), is_hemisphere(&cfg))?,
        warning: None,
    })
}

/// One grid of a convergence study.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyPoint {
    pub n_cells: usize,
    pub time: f64,
    pub r_max: f64,
    pub residuals: [f64; 3],
}

/// Result of [`cmd_study`].
#[derive(Clone, Debug, PartialEq)]
pub struct StudyOutcome {
    pub points: Vec<StudyPoint>,
    /// `(n, error)` rows of the solution study: the deviation from the
    /// closed form for the hemisphere, otherwise `|R_max(n) - R_max(next n)|`.
    pub solution_errors: Vec<(usize, f64)>,
    pub solution_order: Option<f64>,
    pub identity_orders: [Option<f64>; 3],
    pub files: Vec<PathBuf>,
}

/// Runs the configured preset to `t_star` on every grid of `n_list` and
/// writes the solution-error and identity-residual tables to `out`.
/// Grids that fail are reported after the tables of the others are written.
pub fn cmd_study(cfg: &HarnessConfig, n_list: &[usize], out: &Path) -> Result<StudyOutcome> {
    cfg.validate()?;
    if n_list.len() < 3 {
        return Err(Error::invalid(format!(
            "a convergence study needs at least 3 grid sizes, got {n_list:?}"
        )));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(format!(
            "grid sizes must be strictly ascending, got {n_list:?}"
        )));
    }
    let t_star = cfg.t_star;
    let results = par_map(n_list, |&n| -> Result<StudyPoint> {
        let mut flow = cfg.flow.clone();
        flow.n_cells = n;
        flow.t_end = Some(t_star);
        flow.record_every = usize::MAX;
        let trace = run(&flow)?;
        if trace.stop_reason != StopReason::TEnd {
            return Err(Error::StudyAborted {
                n_cells: n,
                msg: format!(
                    "run stopped with `{}` at t = {} before t* = {t_star}",
                    trace.stop_reason,
                    trace.final_time()
                ),
            });
        }
        let metric = trace.snapshots.last().expect("final snapshot");
        let curv = curvature(metric)?;
        let res = identity_residuals(&boundary_normal_derivatives(metric, &curv)?);
        Ok(StudyPoint {
            n_cells: n,
            time: metric.time(),
            r_max: curv.r_max(),
            residuals: res.normalized,
        })
    });
    let mut points = Vec::new();
    let mut first_error = None;
    for r in results {
        match r {
            Ok(p) => points.push(p),
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }

    let solution_errors: Vec<(usize, f64)> = if is_hemisphere(cfg) {
        let exact = 6.0 / (1.0 - 4.0 * t_star);
        points
            .iter()
            .map(|p| (p.n_cells, (p.r_max - exact).abs() / exact))
            .collect()
    } else {
        points
            .windows(2)
            .map(|w| (w[0].n_cells, (w[0].r_max - w[1].r_max).abs()))
            .collect()
    };
    let order_of = |pairs: &[(usize, f64)]| {
        let ns: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let es: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        fitted_order(&ns, &es)
    };
    let solution_order = order_of(&solution_errors);
    let identity_orders = std::array::from_fn(|k| {
        let pairs: Vec<(usize, f64)> = points
            .iter()
            .map(|p| (p.n_cells, p.residuals[k].abs()))
            .collect();
        order_of(&pairs)
    });

    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let fmt_order = |o: Option<f64>| o.map_or("none".to_string(), |o| o.to_string());
    let mut sol = String::from(if is_hemisphere(cfg) {
        "n,error\n"
    } else {
        "n,difference\n"
    });
    for (n, e) in &solution_errors {
        let _ = writeln!(sol, "{n},{e}");
    }
    let _ = writeln!(sol, "# fitted order: {}", fmt_order(solution_order));
    let mut ids = String::from("n,t,i1n,i2n,i3n\n");
    for p in &points {
        let [a, b, c] = p.residuals;
        let _ = writeln!(ids, "{},{},{a},{b},{c}", p.n_cells, p.time);
    }
    let _ = writeln!(
        ids,
        "# fitted order: i1n={} i2n={} i3n={}",
        fmt_order(identity_orders[0]),
        fmt_order(identity_orders[1]),
        fmt_order(identity_orders[2])
    );
    let mut files = Vec::new();
    for (name, text) in [(SOLUTION_STUDY_FILE, sol), (IDENTITY_STUDY_FILE, ids)] {
        let path = out.join(name);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        files.push(path);
    }
    if let Some(e) = first_error {
        return Err(e);
    }
    Ok(StudyOutcome {
        points,
        solution_errors,
        solution_order,
        identity_orders,
        files,
    })
}

/// Table of the built-in presets with their parameters, realised `kappa`
/// and initial pinching at `n_cells`.
pub fn cmd_presets(n_cells: usize) -> Result<String> {
    let examples = [
        Preset::RoundCap { s_max: FRAC_PI_2 },
        Preset::RoundCap {
            s_max: std::f64::consts::FRAC_PI_3,
        },
        Preset::PerturbedCap {
            s_max: 1.4,
            amp: 0.2,
            mode: 2,
        },
        Preset::FlattenedCap {
            s_max: std::f64::consts::FRAC_PI_3,
            aspect: 1.3,
        },
        Preset::FlatBall { radius: 1.0 },
    ];
    let mut out = String::from(
        "preset          parameters                         kappa      eps_star  f_max\n",
    );
    for p in examples {
        let m = p.build(n_cells)?;
        let curv = curvature(&m)?;
        let params: Vec<String> = p
            .params()
            .iter()
            .map(|(k, v)| format!("{k}={v:.4}"))
            .collect();
        let (eps, f) = match (
            crate::pinching::eps_pinch(&curv),
            crate::pinching::f_ratio(&curv),
        ) {
            (Ok((e, _)), Ok((f, _))) => (format!("{e:.4}"), format!("{f:.4}")),
            _ => ("-".into(), "-".into()),
        };
        let _ = writeln!(
            out,
            "{:<15} {:<34} {:<10.4} {eps:<9} {f}",
            p.name(),
            params.join(" "),
            m.kappa()
        );
    }
    Ok(out)
}

/// Reads a configuration file.
pub fn load_config(path: &Path) -> Result<HarnessConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}
