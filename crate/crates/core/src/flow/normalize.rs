use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowTrace;
use crate::geometry::{curvature, integrate, volume, WarpedMetric};

/// One snapshot of the run viewed through `g~ = psi g` with unit volume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedRecord {
    /// Unnormalised time of the snapshot.
    pub time: f64,
    /// `t~ = int_0^t psi dtau`.
    pub t_tilde: f64,
    /// `Vol^(-2/3)`.
    pub psi: f64,
    /// Umbilicity constant of `g~`: `kappa psi^(-1/2)`.
    pub kappa_tilde: f64,
    /// Average scalar curvature of `g~`.
    pub r_tilde: f64,
    /// `(max - min)/mean` of the sectional curvatures.
    pub spread: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NormalizedTrace {
    pub records: Vec<NormalizedRecord>,
}

impl NormalizedTrace {
    pub fn t_tilde(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t_tilde).collect()
    }

    pub fn kappa_tilde(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.kappa_tilde).collect()
    }

    pub fn spread(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.spread).collect()
    }
}

/// Rescales every snapshot of the trace to unit volume and reparametrises
/// time by `t~ = int psi dt` (trapezoid rule over the snapshot times).
pub fn normalize_trace(trace: &FlowTrace) -> Result<NormalizedTrace> {
    normalize_snapshots(&trace.snapshots)
}

pub(crate) fn normalize_snapshots(snapshots: &[WarpedMetric]) -> Result<NormalizedTrace> {
    if snapshots.is_empty() {
        return Err(Error::invalid("cannot normalise a trace without snapshots"));
    }
    let mut records: Vec<NormalizedRecord> = Vec::with_capacity(snapshots.len());
    for snap in snapshots {
        let vol = volume(snap);
        let psi = vol.powf(-2.0 / 3.0);
        let curv = curvature(snap)?;
        let total = integrate(snap, &curv.r_scalar);
        let t_tilde = match records.last() {
            None => 0.0,
            Some(prev) => prev.t_tilde + 0.5 * (prev.psi + psi) * (snap.time() - prev.time),
        };
        records.push(NormalizedRecord {
            time: snap.time(),
            t_tilde,
            psi,
            kappa_tilde: snap.kappa() / psi.sqrt(),
            r_tilde: total / vol / psi,
            spread: curv.spread(),
        });
    }
    Ok(NormalizedTrace { records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{run, run_from, FlowConfig};
    use crate::geometry::{rescale, Preset};
    use std::f64::consts::FRAC_PI_2;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn shrinking_hemisphere_is_stationary() {
        let cfg = FlowConfig::new(Preset::RoundCap { s_max: FRAC_PI_2 })
            .with_cells(64)
            .with_r_stop(60.0)
            .with_record_every(5);
        let norm = normalize_trace(&run(&cfg).unwrap()).unwrap();
        let first = &norm.records[0];
        for r in &norm.records {
            assert!(rel(r.r_tilde, first.r_tilde) < 1e-4, "{r:?}");
            assert!(r.spread < 1e-3);
            assert_eq!(r.kappa_tilde, 0.0);
        }
        assert!(norm.t_tilde().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rescaled_data_gives_the_same_normalized_trace() {
        let preset = Preset::PerturbedCap {
            s_max: 1.4,
            amp: 0.2,
            mode: 2,
        };
        let cfg = FlowConfig::new(preset)
            .with_cells(64)
            .with_t_end(0.05)
            .with_r_stop(1e3)
            .with_record_every(10);
        let base = preset.build(64).unwrap();
        let a = normalize_trace(&run_from(base.clone(), &cfg).unwrap()).unwrap();
        let scaled_cfg = cfg.clone().with_t_end(0.2).with_r_stop(250.0);
        let b =
            normalize_trace(&run_from(rescale(&base, 2.0).unwrap(), &scaled_cfg).unwrap()).unwrap();
        assert_eq!(a.records.len(), b.records.len());
        for (x, y) in a.records.iter().zip(&b.records) {
            assert!(rel(4.0 * x.time, y.time) < 1e-10 || x.time == 0.0);
            assert!((x.t_tilde - y.t_tilde).abs() < 1e-10);
            assert!(rel(x.kappa_tilde, y.kappa_tilde) < 1e-10);
            assert!(rel(x.r_tilde, y.r_tilde) < 1e-10);
            assert!((x.spread - y.spread).abs() < 1e-10);
        }
    }

    #[test]
    fn perturbed_cap_rounds_out() {
        let cfg = FlowConfig::new(Preset::PerturbedCap {
            s_max: 1.4,
            amp: 0.2,
            mode: 2,
        })
        .with_cells(64)
        .with_r_stop(200.0)
        .with_record_every(20);
        let norm = normalize_trace(&run(&cfg).unwrap()).unwrap();
        let (first, last) = (&norm.records[0], norm.records.last().unwrap());
        assert!(last.r_tilde > first.r_tilde);
        assert!(last.spread < first.spread);
        assert!(last.kappa_tilde < first.kappa_tilde);
    }

    #[test]
    fn empty_trace_is_rejected() {
        assert!(normalize_snapshots(&[]).is_err());
    }
}
