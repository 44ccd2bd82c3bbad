//! Raw path cost and planning effort of `sd` as `w_t` varies.

use std::path::Path;

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use crate::bench::{run_benchmark, write_records, BenchOptions, TrialRecord, RESULTS_FILE};
use crate::curves::lower_median;
use crate::planner::PlannerKind;
use crate::scenario::Scenario;
use crate::svg::{line_chart, write_svg};

pub const SWEEP_FILE: &str = "sweep.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub w_t: f64,
    pub trials: usize,
    pub successes: usize,
    pub median_cost_raw: Option<f64>,
    pub median_cost_smoothed: Option<f64>,
    pub median_expansions: Option<u64>,
    pub median_edges_checked: Option<u64>,
    pub median_plan_time_us: Option<u64>,
}

pub fn summarize(w_t: f64, records: &[TrialRecord]) -> SweepRow {
    let ok: Vec<_> = records.iter().filter(|r| r.success).collect();
    SweepRow {
        w_t,
        trials: records.len(),
        successes: ok.len(),
        median_cost_raw: lower_median(&ok.iter().filter_map(|r| r.cost_raw).collect::<Vec<_>>()),
        median_cost_smoothed: lower_median(&ok.iter().filter_map(|r| r.cost_smoothed).collect::<Vec<_>>()),
        median_expansions: lower_median(&ok.iter().map(|r| r.expansions).collect::<Vec<_>>()),
        median_edges_checked: lower_median(&ok.iter().map(|r| r.edges_checked).collect::<Vec<_>>()),
        median_plan_time_us: lower_median(&ok.iter().map(|r| r.plan_time_us).collect::<Vec<_>>()),
    }
}

/// Runs `sd` once per value of `w_t` over the scenario's trials. Returns
/// the summary rows and every trial record.
pub fn run_sweep(
    scenario: &Scenario,
    values: &[f64],
    base: &BenchOptions,
) -> Result<(Vec<SweepRow>, Vec<TrialRecord>)> {
    if values.is_empty() {
        bail!("no w_t values given");
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        bail!("w_t must be a finite non-negative number, got {v}");
    }
    let mut rows = Vec::new();
    let mut all = Vec::new();
    for &w_t in values {
        let mut opts = base.clone();
        opts.planners = vec![PlannerKind::Sd];
        opts.planner.w_t = w_t;
        let records = run_benchmark(scenario, &opts)?;
        rows.push(summarize(w_t, &records));
        all.extend(records);
    }
    Ok((rows, all))
}

/// Writes `sweep.csv`, `results.csv` and `sweep.svg` to `out_dir`.
pub fn write_sweep(out_dir: &Path, rows: &[SweepRow], records: &[TrialRecord]) -> Result<()> {
    write_records(&out_dir.join(RESULTS_FILE), records)?;
    let mut w = csv::Writer::from_path(out_dir.join(SWEEP_FILE))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;

    // A log axis cannot show 0, so it is drawn a decade below the smallest
    // positive value.
    let floor = rows
        .iter()
        .map(|r| r.w_t)
        .filter(|&v| v > 0.0)
        .fold(f64::INFINITY, f64::min);
    let floor = if floor.is_finite() { floor / 10.0 } else { 1e-3 };
    let x = |v: f64| if v > 0.0 { v } else { floor };
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| a.w_t.total_cmp(&b.w_t));
    let cost: Vec<_> = sorted
        .iter()
        .filter_map(|r| r.median_cost_raw.map(|c| (x(r.w_t), c)))
        .collect();
    let time: Vec<_> = sorted
        .iter()
        .filter_map(|r| r.median_plan_time_us.map(|t| (x(r.w_t), t as f64 / 1000.0)))
        .collect();
    let expansions: Vec<_> = sorted
        .iter()
        .filter_map(|r| r.median_expansions.map(|e| (x(r.w_t), e as f64)))
        .collect();
    write_svg(
        &out_dir.join("sweep_cost.svg"),
        &line_chart(
            "Median raw path length vs w_t",
            "w_t",
            "path length",
            &[("sd".into(), cost)],
            true,
        ),
    )?;
    write_svg(
        &out_dir.join("sweep_time.svg"),
        &line_chart(
            "Median plan time vs w_t",
            "w_t",
            "plan time (ms)",
            &[("sd".into(), time)],
            true,
        ),
    )?;
    write_svg(
        &out_dir.join("sweep_expansions.svg"),
        &line_chart(
            "Median expansions vs w_t",
            "w_t",
            "expansions",
            &[("sd".into(), expansions)],
            true,
        ),
    )?;
    Ok(())
}
