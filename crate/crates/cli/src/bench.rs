//! Benchmark trials: one graph per seed, every planner on the same query,
//! one CSV row per (seed, planner).

use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use sdplan_core::{shortcut, Outcome, PlanResult, SmoothParams};
use serde::{Deserialize, Serialize};

use crate::planner::{run_planner, PlannerKind, PlannerOptions};
use crate::scenario::Scenario;

pub const RESULTS_FILE: &str = "results.csv";

/// Columns holding wall-clock measurements; everything else in a row is
/// reproducible from the inputs.
pub const TIME_COLUMNS: [&str; 4] = ["plan_time_us", "t_forward_us", "t_backward_us", "max_iteration_us"];

/// One row of `results.csv`. Times are integer microseconds; costs are
/// empty unless the trial succeeded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub scenario: String,
    pub planner: String,
    pub w_t: f64,
    pub seed: u64,
    /// `path`, `no_path` or `timed_out`.
    pub outcome: String,
    pub success: bool,
    pub plan_time_us: u64,
    pub cost_raw: Option<f64>,
    pub cost_smoothed: Option<f64>,
    pub edges_checked: u64,
    pub configs_checked: u64,
    pub expansions: u64,
    pub astar_iterations: u64,
    pub deepest_layer_expanded: usize,
    pub deepest_layer_checked: usize,
    pub t_forward_us: u64,
    pub t_backward_us: u64,
    pub max_iteration_us: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub planners: Vec<PlannerKind>,
    pub planner: PlannerOptions,
    pub smooth_iters: usize,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

fn micros(d: Duration) -> u64 {
    d.as_micros().try_into().unwrap_or(u64::MAX)
}

fn outcome_name(o: &Outcome) -> &'static str {
    match o {
        Outcome::Path { .. } => "path",
        Outcome::NoPath => "no_path",
        Outcome::TimedOut => "timed_out",
    }
}

impl TrialRecord {
    pub fn new(
        scenario: &str,
        planner: PlannerKind,
        w_t: f64,
        seed: u64,
        result: &PlanResult,
        smoothed: Option<f64>,
    ) -> Self {
        let s = &result.stats;
        Self {
            scenario: scenario.to_string(),
            planner: planner.name().to_string(),
            w_t,
            seed,
            outcome: outcome_name(&result.outcome).to_string(),
            success: result.is_success(),
            plan_time_us: micros(s.wall_time),
            cost_raw: result.cost(),
            cost_smoothed: smoothed,
            edges_checked: s.edges_checked,
            configs_checked: s.configs_checked,
            expansions: s.expansions,
            astar_iterations: s.astar_iterations,
            deepest_layer_expanded: s.deepest_layer_expanded,
            deepest_layer_checked: s.deepest_layer_checked,
            t_forward_us: micros(s.t_forward),
            t_backward_us: micros(s.t_backward),
            max_iteration_us: micros(s.max_iteration),
        }
    }

    /// The row with every wall-clock column zeroed.
    pub fn without_times(&self) -> Self {
        Self {
            plan_time_us: 0,
            t_forward_us: 0,
            t_backward_us: 0,
            max_iteration_us: 0,
            ..self.clone()
        }
    }
}

/// Full output of one planner on one trial, for callers that need more than
/// the CSV row.
#[derive(Debug, Clone)]
pub struct TrialRun {
    pub planner: PlannerKind,
    pub seed: u64,
    pub result: PlanResult,
    pub smoothed: Option<Vec<sdplan_core::Config>>,
    pub record: TrialRecord,
}

/// Builds the graph for `seed` and runs every planner on it.
pub fn run_trial(scenario: &Scenario, seed: u64, opts: &BenchOptions) -> Result<Vec<TrialRun>> {
    log::info!("{}: trial seed {seed}", scenario.name());
    let base = scenario.build_graph(seed);
    let mut out = Vec::with_capacity(opts.planners.len());
    for &kind in &opts.planners {
        let mut graph = base.clone();
        let mut world = scenario.world();
        let result = run_planner(
            kind,
            &mut world,
            &mut graph,
            &scenario.start,
            &scenario.goal,
            &opts.planner,
            seed,
        )
        .with_context(|| format!("{} on {} (seed {seed})", kind, scenario.name()))?;
        let smoothed = result.path().map(|p| {
            let params = SmoothParams {
                iterations: opts.smooth_iters,
                seed,
            };
            shortcut(&mut world, p, &params)
        });
        let smoothed_cost = smoothed.as_deref().map(sdplan_core::path_cost);
        let record = TrialRecord::new(scenario.name(), kind, opts.planner.w_t, seed, &result, smoothed_cost);
        out.push(TrialRun {
            planner: kind,
            seed,
            result,
            smoothed,
            record,
        });
    }
    Ok(out)
}

/// Runs all trials of a scenario, in parallel across seeds, and returns the
/// full runs ordered by seed, then planner.
pub fn run_trials(scenario: &Scenario, opts: &BenchOptions) -> Result<Vec<TrialRun>> {
    if opts.planners.is_empty() {
        bail!("no planners given");
    }
    let seeds = scenario.trial_seeds()?;
    log::info!("{}: seeds {:?}", scenario.name(), seeds);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build()?;
    let per_seed: Vec<Vec<TrialRun>> = pool.install(|| {
        seeds
            .par_iter()
            .map(|&s| run_trial(scenario, s, opts))
            .collect::<Result<_>>()
    })?;
    Ok(per_seed.into_iter().flatten().collect())
}

pub fn run_benchmark(scenario: &Scenario, opts: &BenchOptions) -> Result<Vec<TrialRecord>> {
    Ok(run_trials(scenario, opts)?.into_iter().map(|r| r.record).collect())
}

pub fn write_records(path: &Path, records: &[TrialRecord]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<TrialRecord>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(cost: Option<f64>) -> TrialRecord {
        TrialRecord {
            scenario: "s".into(),
            planner: "sd".into(),
            w_t: 0.1,
            seed: 7,
            outcome: if cost.is_some() { "path" } else { "no_path" }.into(),
            success: cost.is_some(),
            plan_time_us: 1234,
            cost_raw: cost,
            cost_smoothed: cost.map(|c| c * 0.9),
            edges_checked: 10,
            configs_checked: 100,
            expansions: 55,
            astar_iterations: 3,
            deepest_layer_expanded: 4,
            deepest_layer_checked: 3,
            t_forward_us: 500,
            t_backward_us: 0,
            max_iteration_us: 300,
        }
    }

    #[test]
    fn rows_round_trip_losslessly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(RESULTS_FILE);
        let rows = vec![record(Some(1.0 / 3.0)), record(None), record(Some(std::f64::consts::FRAC_1_SQRT_2))];
        write_records(&path, &rows).unwrap();
        assert_eq!(read_records(&path).unwrap(), rows);
    }

    #[test]
    fn header_matches_documented_columns() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(RESULTS_FILE);
        write_records(&path, &[record(None)]).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
        for col in TIME_COLUMNS {
            assert!(header.contains(&col), "{col}");
        }
        assert_eq!(header.len(), 18);
        // Failed trials leave both cost cells empty.
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!((row[7], row[8]), ("", ""));
    }
}
