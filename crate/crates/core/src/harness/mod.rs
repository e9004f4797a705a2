//! Experiment orchestration: configuration, reference runs, n-sweeps,
//! membership tables, oracle cross-checks and output files.

mod checks;
mod config;
mod output;
mod plot;
mod sweep;

pub use checks::{
    avr_row, dominant_modes, oracle_check, selftest, verify_avr, AvrRow, AvrTable, CheckOutcome,
    OracleReport, OracleRow, ORACLE_TOLERANCE,
};
pub use config::{
    CarrierKind, ExperimentConfig, FieldShape, ForceSection, OutputSection, ProblemKind,
    ProblemSection, SweepSection,
};
pub use output::{
    emit_outputs, emit_reference, fmt_float, report_csv, snapshots_csv, trajectory_csv, Manifest,
    RunInfo, CSV_HEADER,
};
pub use sweep::{
    config_hash, run_reference, run_sweep, run_sweep_against, ConvergenceReport, HistoryPoint,
    ReportMetadata, RowStatus, SweepRow,
};

/// Process exit codes of the command-line front end.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG_ERROR: i32 = 2;
    pub const REFERENCE_BLOW_UP: i32 = 3;
    pub const CHECK_FAILED: i32 = 4;
}
