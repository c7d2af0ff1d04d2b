//! Volume-normalised view of a run: the rescaled umbilicity constant and
//! the curvature spread both decay while the metric rounds out.

use ricci_umbilic::{normalize_trace, run, FlowConfig, Preset};

fn main() -> ricci_umbilic::Result<()> {
    let preset = Preset::FlattenedCap {
        s_max: std::f64::consts::FRAC_PI_3,
        aspect: 1.3,
    };
    let trace = run(&FlowConfig::new(preset)
        .with_cells(128)
        .with_record_every(200))?;
    let norm = normalize_trace(&trace)?;

    println!("{preset}");
    println!(
        "{:>8} {:>8} {:>12} {:>10} {:>10}",
        "t", "t~", "kappa~", "R~", "spread"
    );
    let stride = (norm.records.len() / 20).max(1);
    for r in norm
        .records
        .iter()
        .step_by(stride)
        .chain(norm.records.last())
    {
        println!(
            "{:>8.4} {:>8.4} {:>12.6} {:>10.4} {:>10.3e}",
            r.time, r.t_tilde, r.kappa_tilde, r.r_tilde, r.spread
        );
    }
    Ok(())
}
