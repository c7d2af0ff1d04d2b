//! Configuration, persistence and reporting around flow runs.

pub mod commands;
pub mod config;
pub mod io;
pub mod plot;
pub mod report;

pub use commands::{
    cmd_plot, cmd_presets, cmd_report, cmd_run, cmd_study, load_config, PlotOutcome, RunOutcome,
    StudyOutcome, StudyPoint,
};
pub use config::{parse_config, serialize_config, HarnessConfig};
pub use io::{load_run, PersistedRun, Snapshot, TraceRow, TRACE_COLUMNS};
pub use report::{build_report, RunReport, Status, Verdict, VerdictKind};
