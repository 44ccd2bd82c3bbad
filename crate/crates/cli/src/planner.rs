//! Planner selection by name and dispatch to the library entry points.

use std::fmt;
use std::time::Duration;

use clap::ValueEnum;
use sdplan_core::baselines::default_weighted_epsilon;
use sdplan_core::{
    plan_baseline_graph, plan_iterative_deepening, plan_rrt_connect, plan_sd, plan_sd_alternating, plan_sd_anytime,
    plan_sd_bidirectional, Balance, CheckOrder, CollisionWorld, Config, GraphBaseline, LayeredGraph, PlanError,
    PlanResult, RrtParams, SearchParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum)]
pub enum PlannerKind {
    Sd,
    SdBi,
    /// Bidirectional search that flips direction every iteration.
    SdAlt,
    SdAnytime,
    Astar,
    Wastar,
    Greedy,
    Id,
    Rrtc,
}

impl PlannerKind {
    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::Sd => "sd",
            PlannerKind::SdBi => "sd-bi",
            PlannerKind::SdAlt => "sd-alt",
            PlannerKind::SdAnytime => "sd-anytime",
            PlannerKind::Astar => "astar",
            PlannerKind::Wastar => "wastar",
            PlannerKind::Greedy => "greedy",
            PlannerKind::Id => "id",
            PlannerKind::Rrtc => "rrtc",
        }
    }

    pub fn uses_graph(self) -> bool {
        self != PlannerKind::Rrtc
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum BalanceArg {
    /// Accumulated A* wall time, as in the original rule.
    #[default]
    Time,
    /// Accumulated A* expansions; reproducible run to run.
    Work,
}

impl From<BalanceArg> for Balance {
    fn from(b: BalanceArg) -> Self {
        match b {
            BalanceArg::Time => Balance::WallClock,
            BalanceArg::Work => Balance::Work,
        }
    }
}

/// Settings shared by every planner in a run.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannerOptions {
    pub w_t: f64,
    pub balance: Balance,
    /// Weighted A* inflation; `1 + w_t * n_D` when unset.
    pub epsilon: Option<f64>,
    pub time_limit: Option<Duration>,
    /// Refinement budget for `sd-anytime`; unlimited refinement when unset.
    pub anytime_budget: Option<Duration>,
    pub rrt_step: f64,
    pub rrt_max_samples: usize,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        let rrt = RrtParams::default();
        Self {
            w_t: 1.0,
            balance: Balance::WallClock,
            epsilon: None,
            time_limit: None,
            anytime_budget: None,
            rrt_step: rrt.step,
            rrt_max_samples: rrt.max_samples,
        }
    }
}

/// Runs one planner on one query. `seed` drives every random choice the
/// planner makes (edge check order, RRT sampling).
pub fn run_planner(
    kind: PlannerKind,
    world: &mut CollisionWorld,
    graph: &mut LayeredGraph,
    start: &Config,
    goal: &Config,
    opts: &PlannerOptions,
    seed: u64,
) -> Result<PlanResult, PlanError> {
    let params = SearchParams {
        w_t: opts.w_t,
        check_order: CheckOrder::Randomized(seed),
        time_limit: opts.time_limit,
        balance: opts.balance,
    };
    match kind {
        PlannerKind::Sd => plan_sd(world, graph, start, goal, &params),
        PlannerKind::SdBi => plan_sd_bidirectional(world, graph, start, goal, &params),
        PlannerKind::SdAlt => plan_sd_alternating(world, graph, start, goal, &params),
        PlannerKind::SdAnytime => plan_sd_anytime(world, graph, start, goal, &params, opts.anytime_budget),
        PlannerKind::Astar => plan_baseline_graph(GraphBaseline::AstarAdmissible, world, graph, start, goal, &params),
        PlannerKind::Wastar => {
            let epsilon = opts
                .epsilon
                .unwrap_or_else(|| default_weighted_epsilon(opts.w_t, graph));
            // No inflation (w_t = 0 with the default) is plain A*.
            let kind = if epsilon > 1.0 {
                GraphBaseline::WeightedAstar { epsilon }
            } else {
                GraphBaseline::AstarAdmissible
            };
            plan_baseline_graph(kind, world, graph, start, goal, &params)
        }
        PlannerKind::Greedy => plan_baseline_graph(GraphBaseline::Greedy, world, graph, start, goal, &params),
        PlannerKind::Id => plan_iterative_deepening(world, graph, start, goal, &params),
        PlannerKind::Rrtc => {
            let rrt = RrtParams {
                step: opts.rrt_step,
                seed,
                time_limit: opts.time_limit,
                max_samples: opts.rrt_max_samples,
            };
            plan_rrt_connect(world, start, goal, &rrt)
        }
    }
}
