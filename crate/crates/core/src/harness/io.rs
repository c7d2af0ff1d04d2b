//! On-disk layout of a run directory:
//!
//! ```text
//! out/
//!   config.txt        echo of the configuration
//!   trace.csv         one row per record, columns in TRACE_COLUMNS order
//!   meta.json         stop reason, delta and the snapshot index
//!   snapshots/        snapshot_00000.json, ...
//!   report.json
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{NormalizedRecord, StopReason, TraceRecord};
use crate::geometry::{RadialGrid, WarpedMetric};

/// Frozen column order of `trace.csv`.
pub const TRACE_COLUMNS: [&str; 16] = [
    "t",
    "dt",
    "R_max",
    "R_min",
    "ric_min",
    "volume",
    "eps_star",
    "f_max",
    "f_delta_max",
    "i1n",
    "i2n",
    "i3n",
    "h_margin",
    "kappa_tilde",
    "t_tilde",
    "spread_norm",
];

pub const TRACE_FILE: &str = "trace.csv";
pub const META_FILE: &str = "meta.json";
pub const CONFIG_FILE: &str = "config.txt";
pub const REPORT_FILE: &str = "report.json";
pub const SNAPSHOT_DIR: &str = "snapshots";

/// One row of `trace.csv`. Disabled monitors are written as `NaN`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: f64,
    pub dt: f64,
    #[serde(rename = "R_max")]
    pub r_max: f64,
    #[serde(rename = "R_min")]
    pub r_min: f64,
    pub ric_min: f64,
    pub volume: f64,
    pub eps_star: f64,
    pub f_max: f64,
    pub f_delta_max: f64,
    pub i1n: f64,
    pub i2n: f64,
    pub i3n: f64,
    pub h_margin: f64,
    pub kappa_tilde: f64,
    pub t_tilde: f64,
    pub spread_norm: f64,
}

impl TraceRow {
    pub fn new(rec: &TraceRecord, norm: Option<&NormalizedRecord>, identities: bool) -> Self {
        let nan = f64::NAN;
        let pick = |v: f64| if identities { v } else { nan };
        Self {
            t: rec.time,
            dt: rec.dt,
            r_max: rec.r_max,
            r_min: rec.r_min,
            ric_min: rec.ric_min,
            volume: rec.volume,
            eps_star: rec.eps_star,
            f_max: rec.f_max,
            f_delta_max: rec.f_delta_max,
            i1n: pick(rec.i1n),
            i2n: pick(rec.i2n),
            i3n: pick(rec.i3n),
            h_margin: rec.h_margin,
            kappa_tilde: norm.map_or(nan, |n| n.kappa_tilde),
            t_tilde: norm.map_or(nan, |n| n.t_tilde),
            spread_norm: norm.map_or(nan, |n| n.spread),
        }
    }

    /// Values in `TRACE_COLUMNS` order.
    pub fn values(&self) -> [f64; 16] {
        [
            self.t,
            self.dt,
            self.r_max,
            self.r_min,
            self.ric_min,
            self.volume,
            self.eps_star,
            self.f_max,
            self.f_delta_max,
            self.i1n,
            self.i2n,
            self.i3n,
            self.h_margin,
            self.kappa_tilde,
            self.t_tilde,
            self.spread_norm,
        ]
    }

    pub fn from_values(v: [f64; 16]) -> Self {
        Self {
            t: v[0],
            dt: v[1],
            r_max: v[2],
            r_min: v[3],
            ric_min: v[4],
            volume: v[5],
            eps_star: v[6],
            f_max: v[7],
            f_delta_max: v[8],
            i1n: v[9],
            i2n: v[10],
            i3n: v[11],
            h_margin: v[12],
            kappa_tilde: v[13],
            t_tilde: v[14],
            spread_norm: v[15],
        }
    }
}

/// Persisted state of one snapshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub time: f64,
    pub kappa: f64,
    pub n_cells: usize,
    pub rho: Vec<f64>,
    pub phi: Vec<f64>,
}

impl Snapshot {
    pub fn from_metric(m: &WarpedMetric) -> Self {
        Self {
            time: m.time(),
            kappa: m.kappa(),
            n_cells: m.grid().n_cells(),
            rho: m.rho().to_vec(),
            phi: m.phi().to_vec(),
        }
    }

    pub fn to_metric(&self) -> Result<WarpedMetric> {
        WarpedMetric::new(
            RadialGrid::new(self.n_cells)?,
            self.rho.clone(),
            self.phi.clone(),
            self.kappa,
            self.time,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRef {
    /// Row of `trace.csv` (0-based, header excluded) the snapshot belongs to.
    pub record: usize,
    /// Path relative to the run directory.
    pub file: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub stop_reason: StopReason,
    pub stop_detail: Option<String>,
    /// `delta` used by the `f_delta_max` column.
    pub delta: f64,
    pub snapshots: Vec<SnapshotRef>,
}

/// Everything read back from a run directory.
#[derive(Clone, Debug)]
pub struct PersistedRun {
    pub dir: PathBuf,
    pub config_text: String,
    pub rows: Vec<TraceRow>,
    pub meta: RunMeta,
    /// Snapshots in record order, paired with their row index.
    pub snapshots: Vec<(usize, WarpedMetric)>,
}

pub fn snapshot_file_name(record: usize) -> String {
    format!("{SNAPSHOT_DIR}/snapshot_{record:05}.json")
}

pub fn write_trace_csv(path: &Path, rows: &[TraceRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    w.write_record(TRACE_COLUMNS)
        .map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(row.values().iter().map(|v| v.to_string()))
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads `trace.csv`, checking the header and every field. Errors name the
/// first bad row (1-based, header excluded) and column.
pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceRow>> {
    let file = path.display().to_string();
    let schema = |msg: String| Error::Schema {
        file: file.clone(),
        msg,
    };
    let mut r = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let header = r.headers().map_err(|e| csv_err(path, e))?.clone();
    for (k, expected) in TRACE_COLUMNS.iter().enumerate() {
        match header.get(k) {
            Some(found) if found == *expected => {}
            found => {
                return Err(schema(format!(
                    "header column {} is {:?}, expected `{expected}`",
                    k + 1,
                    found.unwrap_or("missing")
                )))
            }
        }
    }
    if header.len() != TRACE_COLUMNS.len() {
        return Err(schema(format!(
            "header has {} columns, expected {}",
            header.len(),
            TRACE_COLUMNS.len()
        )));
    }
    let mut rows = Vec::new();
    for (idx, rec) in r.records().enumerate() {
        let row = idx + 1;
        let rec = rec.map_err(|e| schema(format!("row {row}: {e}")))?;
        if rec.len() != TRACE_COLUMNS.len() {
            let column = TRACE_COLUMNS.get(rec.len()).unwrap_or(&"(extra)");
            return Err(schema(format!(
                "row {row}: {} fields, expected {} (first missing column `{column}`)",
                rec.len(),
                TRACE_COLUMNS.len()
            )));
        }
        let mut values = [0.0; 16];
        for (k, field) in rec.iter().enumerate() {
            values[k] = field.parse().map_err(|_| {
                schema(format!(
                    "row {row}, column `{}`: `{field}` is not a number",
                    TRACE_COLUMNS[k]
                ))
            })?;
        }
        rows.push(TraceRow::from_values(values));
    }
    if let Some(k) = rows.windows(2).position(|w| !(w[1].t > w[0].t)) {
        return Err(schema(format!(
            "row {}, column `t`: times are not increasing",
            k + 2
        )));
    }
    Ok(rows)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Schema {
        file: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Resolves a run directory from either the directory or a file inside it.
pub fn run_dir(path: &Path) -> PathBuf {
    if path.is_file() {
        path.parent()
            .map_or_else(|| PathBuf::from("."), Path::to_path_buf)
    } else {
        path.to_path_buf()
    }
}

/// Loads and cross-checks a run directory.
pub fn load_run(path: &Path) -> Result<PersistedRun> {
    let dir = run_dir(path);
    let config_path = dir.join(CONFIG_FILE);
    let config_text = fs::read_to_string(&config_path).map_err(|e| Error::io(&config_path, e))?;
    let rows = read_trace_csv(&dir.join(TRACE_FILE))?;
    let meta: RunMeta = read_json(&dir.join(META_FILE))?;
    let mut snapshots = Vec::with_capacity(meta.snapshots.len());
    for s in &meta.snapshots {
        let file = dir.join(&s.file);
        let schema = |msg: String| Error::Schema {
            file: file.display().to_string(),
            msg,
        };
        let Some(row) = rows.get(s.record) else {
            return Err(schema(format!(
                "refers to record {} but the trace has {} rows",
                s.record,
                rows.len()
            )));
        };
        let snap: Snapshot = read_json(&file)?;
        for (name, len) in [("rho", snap.rho.len()), ("phi", snap.phi.len())] {
            if len != snap.n_cells + 1 {
                return Err(schema(format!(
                    "field `{name}` has {len} values, n_cells = {}",
                    snap.n_cells
                )));
            }
        }
        if snap.time != row.t {
            return Err(schema(format!(
                "field `time` = {} does not match trace t = {}",
                snap.time, row.t
            )));
        }
        snapshots.push((s.record, snap.to_metric()?));
    }
    Ok(PersistedRun {
        dir,
        config_text,
        rows,
        meta,
        snapshots,
    })
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Schema {
            file: path.display().to_string(),
            msg: format!("{other:?}"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64) -> TraceRow {
        let mut v = [0.1; 16];
        v[0] = t;
        v[1] = 0.25;
        v[13] = f64::NAN;
        v[2] = 1.0 / 3.0;
        TraceRow::from_values(v)
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(TRACE_FILE);
        let rows = vec![row(0.0), row(0.1), row(0.30000000000000004)];
        write_trace_csv(&path, &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(&TRACE_COLUMNS.join(",")));
        assert!(!text.contains('\r'));
        let back = read_trace_csv(&path).unwrap();
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.values().map(f64::to_bits), b.values().map(f64::to_bits));
        }
    }

    #[test]
    fn truncated_csv_names_first_bad_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(TRACE_FILE);
        write_trace_csv(&path, &[row(0.0), row(0.1), row(0.2)]).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let cut = text.trim_end().rfind(',').unwrap();
        fs::write(&path, &text[..cut]).unwrap();
        let msg = read_trace_csv(&path).unwrap_err().to_string();
        assert!(
            msg.contains("row 3") && msg.contains("spread_norm"),
            "{msg}"
        );
    }

    #[test]
    fn bad_field_names_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(TRACE_FILE);
        write_trace_csv(&path, &[row(0.0), row(0.1)]).unwrap();
        let text = fs::read_to_string(&path)
            .unwrap()
            .replacen(",0.25,", ",oops,", 1);
        fs::write(&path, text).unwrap();
        let msg = read_trace_csv(&path).unwrap_err().to_string();
        assert!(msg.contains("row 1") && msg.contains("`dt`"), "{msg}");
    }

    #[test]
    fn wrong_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(TRACE_FILE);
        fs::write(&path, "time,dt\n0,0\n").unwrap();
        let msg = read_trace_csv(&path).unwrap_err().to_string();
        assert!(msg.contains("expected `t`"), "{msg}");
    }

    #[test]
    fn snapshot_round_trip_rebuilds_the_metric() {
        let m = crate::geometry::Preset::PerturbedCap {
            s_max: 1.4,
            amp: 0.2,
            mode: 2,
        }
        .build(32)
        .unwrap();
        let text = serde_json::to_string(&Snapshot::from_metric(&m)).unwrap();
        for key in ["\"time\"", "\"kappa\"", "\"n_cells\"", "\"rho\"", "\"phi\""] {
            assert!(text.contains(key));
        }
        let back: Snapshot = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_metric().unwrap(), m);
    }
}
