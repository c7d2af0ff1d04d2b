//! Residuals of the boundary normal-derivative identities along a flow, and
//! their grid convergence at a fixed time.

use ricci_umbilic::identities::{
    boundary_normal_derivatives, identity_convergence_study, identity_residuals,
};
use ricci_umbilic::{curvature, run, FlowConfig, Preset};

fn main() -> ricci_umbilic::Result<()> {
    let preset = Preset::PerturbedCap {
        s_max: 1.4,
        amp: 0.2,
        mode: 2,
    };
    let cfg = FlowConfig::new(preset)
        .with_cells(128)
        .with_t_end(0.2)
        .with_record_every(500);
    let trace = run(&cfg)?;

    println!("{preset}, kappa = {:.4}", trace.snapshots[0].kappa());
    println!("{:>8} {:>12} {:>12} {:>12}", "t", "i1n", "i2n", "i3n");
    for metric in &trace.snapshots {
        let state = boundary_normal_derivatives(metric, &curvature(metric)?)?;
        let r = identity_residuals(&state);
        let [i1, i2, i3] = r.normalized;
        println!("{:>8.4} {i1:>12.3e} {i2:>12.3e} {i3:>12.3e}", metric.time());
    }

    let study = identity_convergence_study(&FlowConfig::new(preset), &[64, 128, 256], 0.15)?;
    println!("\nat t = {}", study.t_star);
    for row in &study.rows {
        let [i1, i2, i3] = row.residuals.normalized;
        println!("n = {:4}  {i1:>12.3e} {i2:>12.3e} {i3:>12.3e}", row.n_cells);
    }
    println!("fitted orders: {:?}", study.orders);
    Ok(())
}
