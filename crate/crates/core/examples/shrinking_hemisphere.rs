//! The unit hemisphere shrinks homothetically, `g(t) = (1 - 4t) g(0)`, so
//! `R_max = 6/(1 - 4t)` until the flow blows up at `T = 1/4`.

use std::f64::consts::FRAC_PI_2;

use ricci_umbilic::{run, FlowConfig, Preset};

fn main() -> ricci_umbilic::Result<()> {
    let cfg = FlowConfig::new(Preset::RoundCap { s_max: FRAC_PI_2 })
        .with_cells(128)
        .with_record_every(2000);
    let trace = run(&cfg)?;

    println!(
        "{:>10} {:>14} {:>14} {:>10}",
        "t", "R_max", "6/(1-4t)", "rel err"
    );
    for rec in &trace.records {
        let exact = 6.0 / (1.0 - 4.0 * rec.time);
        println!(
            "{:>10.6} {:>14.6} {:>14.6} {:>10.2e}",
            rec.time,
            rec.r_max,
            exact,
            (rec.r_max / exact - 1.0).abs()
        );
    }
    println!(
        "stopped with `{}` at t = {:.6} after {} steps",
        trace.stop_reason,
        trace.final_time(),
        trace.last().step
    );
    Ok(())
}
