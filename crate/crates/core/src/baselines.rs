//! Comparison planners: other heuristics over the same layered graph,
//! layer-by-layer iterative deepening, and bidirectional RRT-connect.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{path_cost, Config};
use crate::graph::{EdgeStateStore, LayeredGraph};
use crate::search::{
    epsilon, prepare, run_loop, DirectionRule, Heuristic, LoopOutcome, LoopSpec, Outcome, PlanError, PlanResult, Query,
    SearchParams, SearchStats,
};
use crate::world::{CheckOrder, CollisionWorld};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GraphBaseline {
    /// Plain A* with the Euclidean heuristic.
    AstarAdmissible,
    /// A* with the Euclidean heuristic inflated by `epsilon` on every layer.
    WeightedAstar { epsilon: f64 },
    /// Best-first by the Euclidean heuristic alone.
    Greedy,
}

impl GraphBaseline {
    pub fn heuristic(&self) -> Heuristic {
        match *self {
            GraphBaseline::AstarAdmissible => Heuristic::admissible(),
            GraphBaseline::WeightedAstar { epsilon } => {
                assert!(epsilon > 1.0, "weighted A* needs epsilon > 1");
                Heuristic::Weighted { epsilon }
            }
            GraphBaseline::Greedy => Heuristic::Greedy,
        }
    }
}

/// Default weighted-A* inflation: the densest layer's `1 + w_t * n_D`.
pub fn default_weighted_epsilon(w_t: f64, graph: &LayeredGraph) -> f64 {
    epsilon(w_t, *graph.counts().last().unwrap())
}

/// The lazy loop over the whole layered graph with a baseline heuristic.
pub fn plan_baseline_graph(
    kind: GraphBaseline,
    world: &mut CollisionWorld,
    graph: &mut LayeredGraph,
    q_s: &Config,
    q_g: &Config,
    params: &SearchParams,
) -> Result<PlanResult, PlanError> {
    let spec = LoopSpec {
        heuristic: kind.heuristic(),
        layer: None,
        prune_below: None,
        reopen: false,
        rule: DirectionRule::Forward,
    };
    run_loop(world, graph, q_s, q_g, params, spec)
}

/// Runs the lazy loop on layer 1 alone, then layer 2, and so on, until a
/// layer yields a valid path. Edge states carry over between layers.
pub fn plan_iterative_deepening(
    world: &mut CollisionWorld,
    graph: &mut LayeredGraph,
    q_s: &Config,
    q_g: &Config,
    params: &SearchParams,
) -> Result<PlanResult, PlanError> {
    if let Some(trivial) = prepare(world, graph, q_s, q_g)? {
        return Ok(trivial);
    }
    let graph: &LayeredGraph = graph;
    let mut query = Query::new(world, graph, params);
    for layer in 1..=graph.depth() {
        let spec = LoopSpec {
            heuristic: Heuristic::admissible(),
            layer: Some(layer),
            prune_below: None,
            reopen: false,
            rule: DirectionRule::Forward,
        };
        match query.lazy_loop(&spec)? {
            LoopOutcome::Path(p) => {
                query.stats.terminal_layer = Some(layer);
                let outcome = query.path_outcome(&p);
                return Ok(query.finish(outcome, p));
            }
            LoopOutcome::NoPath => {}
            LoopOutcome::TimedOut => return Ok(query.finish(Outcome::TimedOut, Vec::new())),
        }
    }
    Ok(query.finish(Outcome::NoPath, Vec::new()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RrtParams {
    /// Maximum extension length in the unit cube.
    pub step: f64,
    pub seed: u64,
    pub time_limit: Option<Duration>,
    /// Samples drawn before giving up.
    pub max_samples: usize,
}

impl Default for RrtParams {
    fn default() -> Self {
        Self {
            step: 0.05,
            seed: 0,
            time_limit: None,
            max_samples: 20_000,
        }
    }
}

struct Tree {
    nodes: Vec<Config>,
    parent: Vec<usize>,
}

impl Tree {
    fn new(root: Config) -> Self {
        Self {
            nodes: vec![root],
            parent: vec![usize::MAX],
        }
    }

    fn nearest(&self, q: &Config) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, n) in self.nodes.iter().enumerate() {
            let d = n.distance(q);
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }

    fn branch(&self, mut i: usize) -> Vec<Config> {
        let mut out = Vec::new();
        while i != usize::MAX {
            out.push(self.nodes[i].clone());
            i = self.parent[i];
        }
        out
    }
}

enum Extend {
    Reached(usize),
    Advanced(usize),
    Trapped,
}

fn extend(world: &mut CollisionWorld, tree: &mut Tree, target: &Config, step: f64) -> Extend {
    let near = tree.nearest(target);
    let from = &tree.nodes[near];
    let d = from.distance(target);
    let (q_new, reached) = if d <= step {
        (target.clone(), true)
    } else {
        (from.lerp(target, step / d), false)
    };
    // Both endpoints lie in the unit cube, so only a collision fails here.
    if !world.is_edge_valid(from, &q_new, CheckOrder::InOrder).unwrap_or(false) {
        return Extend::Trapped;
    }
    tree.nodes.push(q_new);
    tree.parent.push(near);
    let i = tree.nodes.len() - 1;
    if reached {
        Extend::Reached(i)
    } else {
        Extend::Advanced(i)
    }
}

/// Bidirectional RRT-connect in the unit cube. Returns `TimedOut` when the
/// sample budget or time limit runs out; it never reports `NoPath`.
pub fn plan_rrt_connect(
    world: &mut CollisionWorld,
    q_s: &Config,
    q_g: &Config,
    params: &RrtParams,
) -> Result<PlanResult, PlanError> {
    assert!(params.step > 0.0);
    match world.is_config_valid(q_s) {
        Ok(true) => {}
        Ok(false) => return Err(PlanError::InvalidStart("in collision".into())),
        Err(e) => return Err(PlanError::InvalidStart(e.to_string())),
    }
    match world.is_config_valid(q_g) {
        Ok(true) => {}
        Ok(false) => return Err(PlanError::InvalidGoal("in collision".into())),
        Err(e) => return Err(PlanError::InvalidGoal(e.to_string())),
    }
    let started = Instant::now();
    let edges_before = world.edge_check_count();
    let configs_before = world.config_check_count();
    let deadline = params.time_limit.map(|t| started + t);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut a = Tree::new(q_s.clone());
    let mut b = Tree::new(q_g.clone());
    // `a` grows from the start while this is false.
    let mut swapped = false;
    let mut outcome = Outcome::TimedOut;
    let mut stats = SearchStats::default();
    if q_s == q_g {
        outcome = Outcome::Path {
            configs: vec![q_s.clone()],
            cost: 0.0,
        };
    } else {
        for _ in 0..params.max_samples {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                break;
            }
            let q_rand = Config::new((0..q_s.dims()).map(|_| rng.gen::<f64>()).collect());
            let new_a = match extend(world, &mut a, &q_rand, params.step) {
                Extend::Trapped => None,
                Extend::Reached(i) | Extend::Advanced(i) => Some(i),
            };
            if let Some(ia) = new_a {
                let target = a.nodes[ia].clone();
                let joined = loop {
                    match extend(world, &mut b, &target, params.step) {
                        Extend::Reached(ib) => break Some(ib),
                        Extend::Advanced(_) => {}
                        Extend::Trapped => break None,
                    }
                };
                if let Some(ib) = joined {
                    let (mut from_start, from_goal) = if swapped {
                        (b.branch(ib), a.branch(ia))
                    } else {
                        (a.branch(ia), b.branch(ib))
                    };
                    from_start.reverse();
                    // The junction configuration appears at the end of both branches.
                    from_start.extend(from_goal.into_iter().skip(1));
                    let cost = path_cost(&from_start);
                    outcome = Outcome::Path {
                        configs: from_start,
                        cost,
                    };
                    break;
                }
            }
            std::mem::swap(&mut a, &mut b);
            swapped = !swapped;
        }
    }
    stats.expansions = (a.nodes.len() + b.nodes.len()) as u64;
    stats.edges_checked = world.edge_check_count() - edges_before;
    stats.configs_checked = world.config_check_count() - configs_before;
    stats.wall_time = started.elapsed();
    Ok(PlanResult {
        outcome,
        vertices: Vec::new(),
        stats,
        edges: EdgeStateStore::new(),
    })
}
