//! Configured runs: scenarios, sizing checks, diagnostics output, sweeps.

mod config;
mod report;
mod runner;
mod scenario;

pub use config::{
    default_epsilon, gaussian_norm_scale, DiagnosticsSection, EquationSection,
    ExperimentConfig, GridSection, Model, OutputSection, ScalingMode, ScenarioKind,
    ScenarioSection, SolverSection,
};
pub use report::{
    diagnose, emit_reports, load_snapshots, series_csv, snapshot_file_name, sweep, SweepEntry,
    SERIES_HEADER, SNAPSHOT_EXTENSION,
};
pub use runner::{
    effective_wavenumber, run_experiment, sizing_report, soliton_region_h1, ExperimentOutput,
    RunSummary, SizingReport, BOUNDARY_TOLERANCE, TREND_REFERENCE_TIME,
};
pub use scenario::{build_initial, Initial, MIN_SEPARATION, SMALL_AMPLITUDE};
