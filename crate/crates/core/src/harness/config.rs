//! Plain-text `key = value` run configuration.
//!
//! ```text
//! # hemisphere, default resolution
//! preset = round_cap
//! s_max = 1.5707963267948966
//! r_stop = 1000
//! thetas = 0.1, 0.05
//! ```
//!
//! Preset parameters (`s_max`, `amp`, `m`, `aspect`, `radius`) sit next to
//! the solver keys. Keys the chosen preset does not take are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowConfig;
use crate::geometry::Preset;

const PRESET_KEYS: [&str; 5] = ["s_max", "amp", "m", "aspect", "radius"];

const KEYS: [&str; 20] = [
    "preset",
    "n_cells",
    "cfl",
    "t_end",
    "r_stop",
    "record_every",
    "origin_tol",
    "boundary_tol",
    "delta",
    "max_steps",
    "epsilon",
    "thetas",
    "t_star",
    "snapshot_every",
    "output_dir",
    "emit_csv",
    "emit_json",
    "emit_plots",
    "monitor_identities",
    "monitor_normalized",
];

/// Everything a harness command needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub flow: FlowConfig,
    /// Pinching level whose preservation is checked; `None` uses
    /// `eps_star` of the initial data.
    pub epsilon: Option<f64>,
    /// Weights for the gradient-ratio constants, each in `(0, 1)`.
    pub thetas: Vec<f64>,
    /// Sample time of convergence studies.
    pub t_star: f64,
    /// Persist a snapshot every this many records (the last record is
    /// always persisted).
    pub snapshot_every: usize,
    pub output_dir: PathBuf,
    pub emit_csv: bool,
    pub emit_json: bool,
    pub emit_plots: bool,
    /// Fill the identity-residual columns; `nan` otherwise.
    pub monitor_identities: bool,
    /// Fill the normalized-flow columns; `nan` otherwise.
    pub monitor_normalized: bool,
}

impl HarnessConfig {
    pub fn new(preset: Preset) -> Self {
        Self {
            flow: FlowConfig::new(preset),
            epsilon: None,
            thetas: vec![0.1, 0.05],
            t_star: 0.1,
            snapshot_every: 10,
            output_dir: PathBuf::from("out"),
            emit_csv: true,
            emit_json: true,
            emit_plots: false,
            monitor_identities: true,
            monitor_normalized: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.flow.validate()?;
        if let Some(t) = self.thetas.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
            return Err(Error::invalid(format!("theta = {t} is outside (0, 1)")));
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0 && e < 1.0 / 3.0) {
                return Err(Error::invalid(format!("epsilon = {e} is outside (0, 1/3)")));
            }
        }
        if !(self.t_star > 0.0) {
            return Err(Error::invalid(format!(
                "t_star must be positive, got {}",
                self.t_star
            )));
        }
        if self.snapshot_every == 0 {
            return Err(Error::invalid("snapshot_every must be at least 1"));
        }
        if self.output_dir.as_os_str().is_empty() {
            return Err(Error::invalid("output_dir is empty"));
        }
        Ok(())
    }
}

/// Parses a configuration file. Every error names the offending line and
/// key; a missing preset is reported against line 0.
pub fn parse_config(text: &str) -> Result<HarnessConfig> {
    let mut seen: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Config {
                line,
                key: content.to_string(),
                msg: "expected `key = value`".into(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) && !PRESET_KEYS.contains(&key) {
            return Err(config_err(line, key, "unknown key"));
        }
        if value.is_empty() {
            return Err(config_err(line, key, "missing value"));
        }
        if let Some((first, _)) = seen.get(key) {
            return Err(config_err(
                line,
                key,
                &format!("duplicate key (first set on line {first})"),
            ));
        }
        seen.insert(key.to_string(), (line, value.to_string()));
    }

    let Some((preset_line, preset_name)) = seen.get("preset").cloned() else {
        return Err(config_err(0, "preset", "a preset is required"));
    };
    let mut params = BTreeMap::new();
    for key in PRESET_KEYS {
        if let Some((line, value)) = seen.get(key) {
            params.insert(key.to_string(), parse_f64(*line, key, value)?);
        }
    }
    let preset = Preset::from_params(&preset_name, &params).map_err(|e| {
        // Blame the first parameter the preset rejects, or the preset line.
        let bad = params
            .keys()
            .find(|k| e.to_string().contains(&format!("`{k}`")))
            .and_then(|k| seen.get(k.as_str()).map(|(l, _)| (*l, k.clone())));
        let (line, key) = bad.unwrap_or((preset_line, "preset".into()));
        config_err(line, &key, &e.to_string())
    })?;

    let mut cfg = HarnessConfig::new(preset);
    for (key, (line, value)) in &seen {
        let (line, key, value) = (*line, key.as_str(), value.as_str());
        match key {
            "n_cells" => cfg.flow.n_cells = parse_usize(line, key, value)?,
            "cfl" => cfg.flow.cfl_factor = parse_f64(line, key, value)?,
            "t_end" => cfg.flow.t_end = parse_opt_f64(line, key, value)?,
            "r_stop" => cfg.flow.r_stop = parse_f64(line, key, value)?,
            "record_every" => cfg.flow.record_every = parse_usize(line, key, value)?,
            "origin_tol" => cfg.flow.origin_tol = parse_f64(line, key, value)?,
            "boundary_tol" => cfg.flow.boundary_tol = parse_f64(line, key, value)?,
            "delta" => cfg.flow.delta = parse_opt_f64(line, key, value)?,
            "max_steps" => cfg.flow.max_steps = parse_usize(line, key, value)?,
            "epsilon" => cfg.epsilon = parse_opt_f64(line, key, value)?,
            "thetas" => {
                cfg.thetas = value
                    .split(',')
                    .map(|v| parse_f64(line, key, v.trim()))
                    .collect::<Result<_>>()?
            }
            "t_star" => cfg.t_star = parse_f64(line, key, value)?,
            "snapshot_every" => cfg.snapshot_every = parse_usize(line, key, value)?,
            "output_dir" => cfg.output_dir = PathBuf::from(value),
            "emit_csv" => cfg.emit_csv = parse_bool(line, key, value)?,
            "emit_json" => cfg.emit_json = parse_bool(line, key, value)?,
            "emit_plots" => cfg.emit_plots = parse_bool(line, key, value)?,
            "monitor_identities" => cfg.monitor_identities = parse_bool(line, key, value)?,
            "monitor_normalized" => cfg.monitor_normalized = parse_bool(line, key, value)?,
            _ => {}
        }
    }

    cfg.validate().map_err(|e| {
        let msg = e.to_string();
        let key = blame_key(&msg);
        let line = seen.get(key).map(|(l, _)| *l).unwrap_or(0);
        config_err(line, key, &msg)
    })?;
    Ok(cfg)
}

/// Writes a configuration back out; `parse_config` inverts it exactly.
pub fn serialize_config(cfg: &HarnessConfig) -> String {
    let mut out = String::new();
    let f = &cfg.flow;
    let _ = writeln!(out, "preset = {}", f.preset.name());
    for (k, v) in f.preset.params() {
        let _ = writeln!(out, "{k} = {v}");
    }
    let opt = |v: Option<f64>| v.map_or("none".to_string(), |v| v.to_string());
    let _ = writeln!(out, "n_cells = {}", f.n_cells);
    let _ = writeln!(out, "cfl = {}", f.cfl_factor);
    let _ = writeln!(out, "t_end = {}", opt(f.t_end));
    let _ = writeln!(out, "r_stop = {}", f.r_stop);
    let _ = writeln!(out, "record_every = {}", f.record_every);
    let _ = writeln!(out, "origin_tol = {}", f.origin_tol);
    let _ = writeln!(out, "boundary_tol = {}", f.boundary_tol);
    let _ = writeln!(out, "delta = {}", opt(f.delta));
    let _ = writeln!(out, "max_steps = {}", f.max_steps);
    let _ = writeln!(out, "epsilon = {}", opt(cfg.epsilon));
    let thetas: Vec<String> = cfg.thetas.iter().map(|t| t.to_string()).collect();
    let _ = writeln!(out, "thetas = {}", thetas.join(", "));
    let _ = writeln!(out, "t_star = {}", cfg.t_star);
    let _ = writeln!(out, "snapshot_every = {}", cfg.snapshot_every);
    let _ = writeln!(out, "output_dir = {}", cfg.output_dir.display());
    let _ = writeln!(out, "emit_csv = {}", cfg.emit_csv);
    let _ = writeln!(out, "emit_json = {}", cfg.emit_json);
    let _ = writeln!(out, "emit_plots = {}", cfg.emit_plots);
    let _ = writeln!(out, "monitor_identities = {}", cfg.monitor_identities);
    let _ = writeln!(out, "monitor_normalized = {}", cfg.monitor_normalized);
    out
}

fn config_err(line: usize, key: &str, msg: &str) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        msg: msg.to_string(),
    }
}

/// Maps a validation message back to the key it concerns.
fn blame_key(msg: &str) -> &'static str {
    const BY_WORD: [(&str, &str); 9] = [
        ("cfl", "cfl"),
        ("record_every", "record_every"),
        ("r_stop", "r_stop"),
        ("t_end", "t_end"),
        ("delta", "delta"),
        ("theta", "thetas"),
        ("epsilon", "epsilon"),
        ("t_star", "t_star"),
        ("snapshot_every", "snapshot_every"),
    ];
    BY_WORD
        .iter()
        .find(|(word, _)| msg.contains(word))
        .map_or("output_dir", |(_, key)| key)
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| config_err(line, key, &format!("`{value}` is not a finite number")))
}

fn parse_opt_f64(line: usize, key: &str, value: &str) -> Result<Option<f64>> {
    if value.eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    parse_f64(line, key, value).map(Some)
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize> {
    value.parse::<usize>().map_err(|_| {
        config_err(
            line,
            key,
            &format!("`{value}` is not a non-negative integer"),
        )
    })
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(config_err(
            line,
            key,
            &format!("`{value}` is not a boolean"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn line_of(e: Error) -> (usize, String) {
        match e {
            Error::Config { line, key, .. } => (line, key),
            other => panic!("expected a config error, got {other}"),
        }
    }

    #[test]
    fn empty_text_needs_a_preset() {
        assert_eq!(line_of(parse_config("").unwrap_err()), (0, "preset".into()));
    }

    #[test]
    fn defaults() {
        let cfg = parse_config("preset = round_cap\n").unwrap();
        assert_eq!(cfg.flow.n_cells, 256);
        assert_eq!(cfg.flow.cfl_factor, 0.25);
        assert_eq!(cfg.flow.r_stop, 1000.0);
        assert_eq!(cfg.flow.record_every, 20);
        assert_eq!(cfg.flow.delta, None);
        assert_eq!(cfg.flow.preset, Preset::RoundCap { s_max: FRAC_PI_2 });
    }

    #[test]
    fn realizes_kappa() {
        let cfg = parse_config("preset = round_cap\ns_max = 1.0471975512").unwrap();
        let m = cfg.flow.preset.build(64).unwrap();
        assert!((m.kappa() - 0.5774).abs() < 1e-4);
    }

    #[test]
    fn rejects_with_line_and_key() {
        let (line, key) = line_of(parse_config("preset = round_cap\ncfl = 0.9\n").unwrap_err());
        assert_eq!((line, key.as_str()), (2, "cfl"));
        let (line, key) =
            line_of(parse_config("# c\npreset = round_cap\nspeed = 3\n").unwrap_err());
        assert_eq!((line, key.as_str()), (3, "speed"));
        let (line, key) =
            line_of(parse_config("preset = round_cap\nn_cells = lots\n").unwrap_err());
        assert_eq!((line, key.as_str()), (2, "n_cells"));
        let (line, key) = line_of(parse_config("preset = round_cap\namp = 0.1\n").unwrap_err());
        assert_eq!((line, key.as_str()), (2, "amp"));
        let (line, key) =
            line_of(parse_config("preset = round_cap\nthetas = 0.1, 2\n").unwrap_err());
        assert_eq!((line, key.as_str()), (2, "thetas"));
        let (line, _) =
            line_of(parse_config("preset = round_cap\nr_stop = 5\nr_stop = 6\n").unwrap_err());
        assert_eq!(line, 3);
    }

    #[test]
    fn comments_and_spacing() {
        let cfg = parse_config("  preset=perturbed_cap # trailing\n\n amp = 0.1\nm=3\n").unwrap();
        assert_eq!(
            cfg.flow.preset,
            Preset::PerturbedCap {
                s_max: FRAC_PI_2,
                amp: 0.1,
                mode: 3
            }
        );
    }

    #[test]
    fn serialize_round_trip() {
        let mut cfg = HarnessConfig::new(Preset::FlattenedCap {
            s_max: 1.1,
            aspect: 1.3,
        });
        cfg.flow.t_end = Some(0.125);
        cfg.flow.delta = Some(0.02);
        cfg.thetas = vec![0.3, 0.07];
        cfg.emit_plots = true;
        assert_eq!(parse_config(&serialize_config(&cfg)).unwrap(), cfg);
    }
}
