//! Simulation front end for the MRP sliding-mode attitude controller: scenario
//! files, telemetry CSV, SVG figures, the verification report and Monte Carlo
//! sweeps.

pub mod plot;
pub mod scenario;
pub mod sweep;
pub mod telemetry;
pub mod verify;

pub use plot::{build_charts, emit_plots, Chart, Series};
pub use scenario::{load_scenario, Scenario, ScenarioError, DEFAULT_CONVERGENCE_TOL, REFERENCE_JSON};
pub use sweep::{settling_time, sweep, write_sweep_csv, SweepConfig, SweepError, SweepRow, SweepSummary};
pub use telemetry::{
    read_csv, run_simulation, run_simulation_with, write_csv, TelemetryError, TelemetryRecord, CSV_HEADER,
};
pub use verify::{verify, verify_with, CheckResult, Status, VerificationReport};
