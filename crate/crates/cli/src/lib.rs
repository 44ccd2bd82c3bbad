//! Scenario files, benchmark runs and figure output for the `sdplan`
//! command-line tool.

pub mod bench;
pub mod curves;
pub mod planner;
pub mod scenario;
pub mod svg;
pub mod sweep;

pub use bench::{read_records, run_benchmark, run_trials, write_records, BenchOptions, TrialRecord, TrialRun};
pub use curves::{emit_curves, lower_median};
pub use planner::{run_planner, BalanceArg, PlannerKind, PlannerOptions};
pub use scenario::{bundled, load_scenario, Scenario, ScenarioError};
pub use svg::{emit_svg_layers, emit_svg_scene};
pub use sweep::{run_sweep, write_sweep, SweepRow};
