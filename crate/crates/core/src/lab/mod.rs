//! Scenario files, snapshots, exports and the orchestration behind the CLI.

pub mod config;
pub mod export;
pub mod run;
pub mod snapshot;
pub mod verify;

pub use config::{Check, DiagnosticsSpec, ExportFormat, GridSpec, InitialData, ModelKind, ModelSpec, OutputSpec, Scenario, StabilitySpec, TimeSpec};
pub use export::{fmt_num, report_table, series_table, to_json, Table};
pub use run::{initial_field, run_scenario, run_stage, taylor_green, RunOptions, RunSummary, Stage};
pub use snapshot::{decode_snapshot, encode_snapshot, read_snapshot, write_snapshot, SnapshotHeader, FORMAT_VERSION};
pub use verify::{run_criterion, CriterionResult, CRITERIA};
