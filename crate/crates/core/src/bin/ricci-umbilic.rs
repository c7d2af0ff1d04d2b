use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ricci_umbilic::harness::{
    cmd_plot, cmd_presets, cmd_report, cmd_run, cmd_study, load_config, Status,
};

#[derive(Parser)]
#[command(
    version,
    about = "Ricci flow on rotationally symmetric 3-balls with umbilic boundary"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print only errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one flow and write trace.csv, snapshots/ and report.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides output_dir of the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid-convergence tables for the configured preset.
    Study {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
        n_list: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate report.json of a run directory.
    Report { path: PathBuf },
    /// Write SVG plots and a gnuplot script for a run directory.
    Plot { path: PathBuf },
    /// List the built-in presets.
    Presets {
        #[arg(long, default_value_t = 128)]
        n_cells: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> ricci_umbilic::Result<ExitCode> {
    let quiet = cli.quiet;
    let say = |msg: String| {
        if !quiet {
            println!("{msg}");
        }
    };
    match cli.command {
        Command::Run { config, out } => {
            let mut cfg = load_config(&config)?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            let outcome = cmd_run(&cfg)?;
            print_report(&outcome.report, quiet);
            say(format!("wrote {}", outcome.dir.display()));
            Ok(ExitCode::from(outcome.exit_code() as u8))
        }
        Command::Study {
            config,
            n_list,
            out,
        } => {
            let cfg = load_config(&config)?;
            let out = out.unwrap_or_else(|| cfg.output_dir.clone());
            let study = cmd_study(&cfg, &n_list, &out)?;
            for (n, e) in &study.solution_errors {
                say(format!("n = {n:5}  solution error {e:.6e}"));
            }
            say(format!("solution order: {:?}", study.solution_order));
            for p in &study.points {
                let [a, b, c] = p.residuals;
                say(format!(
                    "n = {:5}  i1n {a:+.6e}  i2n {b:+.6e}  i3n {c:+.6e}",
                    p.n_cells
                ));
            }
            say(format!("identity orders: {:?}", study.identity_orders));
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { path } => {
            let report = cmd_report(&path)?;
            print_report(&report, quiet);
            Ok(ExitCode::from(u8::from(!report.passed)))
        }
        Command::Plot { path } => {
            let outcome = cmd_plot(&path)?;
            if let Some(w) = outcome.warning {
                eprintln!("warning: {w}");
            }
            for f in outcome.files {
                say(format!("wrote {}", f.display()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Presets { n_cells } => {
            print!("{}", cmd_presets(n_cells)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_report(report: &ricci_umbilic::harness::RunReport, quiet: bool) {
    if quiet {
        return;
    }
    println!(
        "stopped with `{}` at t = {:.6} after {} records",
        report.stop_reason, report.final_time, report.rows
    );
    for v in &report.verdicts {
        if v.status == Status::NotApplicable {
            continue;
        }
        let status = serde_json::to_value(v.status).unwrap_or_default();
        let measured = v.measured.map_or("-".to_string(), |m| format!("{m:.4e}"));
        println!(
            "  {:<34} {:<19} measured {measured:<11} {}",
            v.name,
            status.as_str().unwrap_or(""),
            v.detail
        );
    }
}
