//! Pinching summary of a perturbed cap flowing to blow-up: the preserved
//! pinching level, the bound on `f = S/R^2`, the power-law fit of the
//! anisotropy and the gradient-ratio constants.

use ricci_umbilic::pinching::{h_diagonal_max, pinching_report};
use ricci_umbilic::{run, FlowConfig, Preset};

fn main() -> ricci_umbilic::Result<()> {
    let preset = Preset::PerturbedCap {
        s_max: 1.4,
        amp: 0.2,
        mode: 2,
    };
    let trace = run(&FlowConfig::new(preset).with_cells(128))?;
    let report = pinching_report(&trace, &[0.1, 0.05])?;

    println!(
        "{preset} stopped with `{}` at t = {:.5}",
        trace.stop_reason,
        trace.final_time()
    );
    println!(
        "eps*: initial {:.4}, smallest {:.4} (record {})",
        report.eps_star_initial, report.eps_star, report.eps_star_record
    );
    println!(
        "f = S/R^2: largest {:.4} at record {}, node {}",
        report.f_max, report.f_max_record, report.f_max_node
    );
    println!(
        "f_delta with delta = {:.4}: largest {:.4e}",
        report.delta, report.f_delta_max
    );
    println!(
        "boundary margin a/(2b): smallest {:.4}",
        report.h_condition_margin
    );
    match (&report.delta_fit, &report.delta_fit_error) {
        (Some(fit), _) => println!("anisotropy fit: {fit:?}"),
        (None, Some(e)) => println!("anisotropy fit unavailable: {e}"),
        _ => {}
    }
    for c in &report.grad_constants {
        println!(
            "C({}) = {:.4} (cubic), {:.4} (3/2 power)",
            c.theta, c.c_cubic, c.c_three_halves
        );
    }

    println!("\nboundary sign polynomial on the diagonal:");
    for eps in [0.0, 0.25, 0.5, 1.0, 2.0] {
        println!("    eps = {eps:4}: {:+.4}", h_diagonal_max(eps));
    }
    Ok(())
}
