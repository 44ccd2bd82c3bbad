//! Per-planner summaries of benchmark records: cumulative success over
//! time and median costs.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::bench::TrialRecord;
use crate::svg::{line_chart, write_svg};

pub const SUCCESS_FILE: &str = "success_rate.csv";
pub const MEDIANS_FILE: &str = "medians.csv";
const GRID_POINTS: usize = 40;

/// Lower median: the `(n - 1) / 2`-th smallest value, so even counts pick
/// the smaller of the two middle values.
pub fn lower_median<T: Copy + PartialOrd>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("median of unordered values"));
    Some(v[(v.len() - 1) / 2])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessPoint {
    pub planner: String,
    pub time_us: u64,
    pub success_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MedianRow {
    pub planner: String,
    pub trials: usize,
    pub successes: usize,
    pub median_cost_raw: Option<f64>,
    pub median_cost_smoothed: Option<f64>,
    pub median_plan_time_us: Option<u64>,
    pub median_edges_checked: Option<u64>,
    pub median_expansions: Option<u64>,
    pub note: String,
}

/// Planner names in order of first appearance.
pub fn planners_in(records: &[TrialRecord]) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for r in records {
        if !names.contains(&r.planner) {
            names.push(r.planner.clone());
        }
    }
    names
}

/// Log-spaced times from the fastest success to the slowest trial.
pub fn time_grid(records: &[TrialRecord]) -> Vec<u64> {
    let lo = records
        .iter()
        .filter(|r| r.success)
        .map(|r| r.plan_time_us)
        .min()
        .unwrap_or(1)
        .max(1);
    let hi = records.iter().map(|r| r.plan_time_us).max().unwrap_or(lo).max(lo);
    if hi == lo {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut grid: Vec<u64> = (0..GRID_POINTS)
        .map(|k| (a + (b - a) * k as f64 / (GRID_POINTS - 1) as f64).exp().round() as u64)
        .collect();
    // Rounding must not push the ends past the data.
    grid[0] = lo;
    grid[GRID_POINTS - 1] = hi;
    grid.dedup();
    grid
}

pub fn success_curves(records: &[TrialRecord]) -> Vec<SuccessPoint> {
    let grid = time_grid(records);
    let mut out = Vec::new();
    for name in planners_in(records) {
        let rows: Vec<_> = records.iter().filter(|r| r.planner == name).collect();
        for &t in &grid {
            let done = rows.iter().filter(|r| r.success && r.plan_time_us <= t).count();
            out.push(SuccessPoint {
                planner: name.clone(),
                time_us: t,
                success_fraction: done as f64 / rows.len() as f64,
            });
        }
    }
    out
}

pub fn medians(records: &[TrialRecord]) -> Vec<MedianRow> {
    planners_in(records)
        .into_iter()
        .map(|name| {
            let rows: Vec<_> = records.iter().filter(|r| r.planner == name).collect();
            let ok: Vec<_> = rows.iter().filter(|r| r.success).collect();
            let pick = |f: &dyn Fn(&TrialRecord) -> Option<f64>| {
                lower_median(&ok.iter().filter_map(|r| f(r)).collect::<Vec<_>>())
            };
            let pick_u = |f: &dyn Fn(&TrialRecord) -> u64| lower_median(&ok.iter().map(|r| f(r)).collect::<Vec<_>>());
            MedianRow {
                planner: name.clone(),
                trials: rows.len(),
                successes: ok.len(),
                median_cost_raw: pick(&|r| r.cost_raw),
                median_cost_smoothed: pick(&|r| r.cost_smoothed),
                median_plan_time_us: pick_u(&|r| r.plan_time_us),
                median_edges_checked: pick_u(&|r| r.edges_checked),
                median_expansions: pick_u(&|r| r.expansions),
                note: if ok.is_empty() {
                    "no successful trials".to_string()
                } else {
                    String::new()
                },
            }
        })
        .collect()
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `success_rate.csv`, `medians.csv` and their SVG plots.
pub fn emit_curves(records: &[TrialRecord], out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let success = success_curves(records);
    write_csv(&out_dir.join(SUCCESS_FILE), &success)?;
    let med = medians(records);
    write_csv(&out_dir.join(MEDIANS_FILE), &med)?;

    let names = planners_in(records);
    let series: Vec<(String, Vec<(f64, f64)>)> = names
        .iter()
        .map(|n| {
            let pts = success
                .iter()
                .filter(|p| &p.planner == n)
                .map(|p| (p.time_us as f64 / 1000.0, p.success_fraction))
                .collect();
            (n.clone(), pts)
        })
        .collect();
    write_svg(
        &out_dir.join("success_rate.svg"),
        &line_chart(
            "Fraction of trials solved",
            "plan time (ms)",
            "fraction solved",
            &series,
            true,
        ),
    )?;

    // Median smoothed cost among trials solved by each time.
    let grid = time_grid(records);
    let cost_series: Vec<(String, Vec<(f64, f64)>)> = names
        .iter()
        .map(|n| {
            let pts = grid
                .iter()
                .filter_map(|&t| {
                    let costs: Vec<f64> = records
                        .iter()
                        .filter(|r| &r.planner == n && r.success && r.plan_time_us <= t)
                        .filter_map(|r| r.cost_smoothed)
                        .collect();
                    lower_median(&costs).map(|c| (t as f64 / 1000.0, c))
                })
                .collect();
            (n.clone(), pts)
        })
        .collect();
    write_svg(
        &out_dir.join("medians.svg"),
        &line_chart(
            "Median smoothed path length",
            "plan time (ms)",
            "path length",
            &cost_series,
            true,
        ),
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(planner: &str, success: bool, time: u64, cost: f64) -> TrialRecord {
        TrialRecord {
            scenario: "s".into(),
            planner: planner.into(),
            w_t: 1.0,
            seed: 0,
            outcome: if success { "path" } else { "timed_out" }.into(),
            success,
            plan_time_us: time,
            cost_raw: success.then_some(cost),
            cost_smoothed: success.then_some(cost * 0.9),
            edges_checked: time,
            configs_checked: 0,
            expansions: time,
            astar_iterations: 1,
            deepest_layer_expanded: 1,
            deepest_layer_checked: 1,
            t_forward_us: 0,
            t_backward_us: 0,
            max_iteration_us: 0,
        }
    }

    #[test]
    fn lower_median_picks_smaller_middle() {
        assert_eq!(lower_median(&[4.0, 1.0, 3.0, 2.0]), Some(2.0));
        assert_eq!(lower_median(&[5, 1, 3]), Some(3));
        assert_eq!(lower_median::<f64>(&[]), None);
    }

    #[test]
    fn instant_successes_reach_one_at_first_point() {
        let rs = vec![rec("a", true, 5, 1.0), rec("a", true, 5, 2.0), rec("b", true, 5, 1.0)];
        let curves = success_curves(&rs);
        assert_eq!(curves.len(), 2);
        assert!(curves.iter().all(|p| p.success_fraction == 1.0 && p.time_us == 5));
    }

    #[test]
    fn fractions_are_cumulative() {
        let rs = vec![
            rec("a", true, 10, 1.0),
            rec("a", true, 1000, 1.0),
            rec("a", false, 5000, 0.0),
            rec("a", true, 100, 1.0),
        ];
        let curves = success_curves(&rs);
        assert!(curves
            .windows(2)
            .all(|w| w[0].success_fraction <= w[1].success_fraction));
        assert_eq!(curves.first().unwrap().success_fraction, 0.25);
        assert_eq!(curves.last().unwrap().success_fraction, 0.75);
    }

    #[test]
    fn planner_without_successes_gets_a_note() {
        let rs = vec![
            rec("a", true, 10, 2.0),
            rec("a", true, 20, 4.0),
            rec("b", false, 10, 0.0),
        ];
        let m = medians(&rs);
        assert_eq!(m[0].median_cost_raw, Some(2.0));
        assert_eq!(m[1].successes, 0);
        assert_eq!(m[1].median_cost_raw, None);
        assert_eq!(m[1].note, "no successful trials");
    }

    #[test]
    fn emits_all_files() {
        let dir = tempfile::tempdir().unwrap();
        emit_curves(&[rec("a", true, 10, 2.0), rec("b", false, 30, 0.0)], dir.path()).unwrap();
        for f in [SUCCESS_FILE, MEDIANS_FILE, "success_rate.svg", "medians.svg"] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
    }
}
