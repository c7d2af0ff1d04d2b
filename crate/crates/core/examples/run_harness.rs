//! Runs a configuration end to end: trace, snapshots, report and plots,
//! then regenerates the report from disk.

use ricci_umbilic::harness::{cmd_report, cmd_run, parse_config, Status};

const CONFIG: &str = "\
# perturbed cap, coarse grid
preset = perturbed_cap
s_max = 1.4
amp = 0.2
m = 2
n_cells = 96
emit_plots = true
";

fn main() -> ricci_umbilic::Result<()> {
    let mut cfg = parse_config(CONFIG)?;
    cfg.output_dir = std::env::temp_dir().join("ricci-umbilic-run");
    let outcome = cmd_run(&cfg)?;
    let report = &outcome.report;

    println!(
        "stopped with `{}` at t = {:.5} after {} records",
        report.stop_reason, report.final_time, report.rows
    );
    for v in report
        .verdicts
        .iter()
        .filter(|v| v.status != Status::NotApplicable)
    {
        println!("  {:<30} {:?}", v.name, v.status);
    }
    println!(
        "wrote {} files under {}",
        outcome.files.len(),
        outcome.dir.display()
    );

    let again = cmd_report(&outcome.dir)?;
    println!("regenerated report identical: {}", &again == report);
    Ok(())
}
