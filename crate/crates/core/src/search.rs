//! A* over the optimistic layered graph, the lazy edge-evaluation loop
//! around it, the time-balanced bidirectional variant and anytime
//! refinement.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{distance, path_cost, Config};
use crate::graph::{
    is_sentinel, EdgeKind, EdgeState, EdgeStateStore, GraphError, LayeredGraph, NodeId, VertexId, GOAL, START,
};
use crate::halton::mix64;
use crate::world::{CheckOrder, CollisionWorld, WorldError};

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("start configuration is invalid: {0}")]
    InvalidStart(String),
    #[error("goal configuration is invalid: {0}")]
    InvalidGoal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    World(#[from] WorldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// What the bidirectional loop balances between directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Balance {
    /// Accumulated A* wall time.
    WallClock,
    /// Accumulated A* expansions; deterministic stand-in for wall time.
    Work,
}

/// Ordering heuristic used by A*.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Heuristic {
    /// `h_x * (1 + w_t * n_layer)`.
    SelectiveDensification { w_t: f64 },
    /// `epsilon * h_x` on every layer.
    Weighted { epsilon: f64 },
    /// Order by `h_x` alone.
    Greedy,
}

impl Heuristic {
    pub fn admissible() -> Self {
        Heuristic::SelectiveDensification { w_t: 0.0 }
    }
}

/// Euclidean distance from a configuration to the search target.
pub fn h_x(q: &[f64], target: &[f64]) -> f64 {
    distance(q, target)
}

/// Inflation factor `1 + w_t * n` of a layer with `n` nodes.
pub fn epsilon(w_t: f64, n: usize) -> f64 {
    1.0 + w_t * n as f64
}

/// `h_x(q) * (1 + w_t * n_layer)`, with `layer` 1-based into `counts`.
pub fn h_sd(q: &[f64], target: &[f64], layer: usize, w_t: f64, counts: &[usize]) -> f64 {
    h_x(q, target) * epsilon(w_t, counts[layer - 1])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    pub w_t: f64,
    /// Order for edges checked without a swept cache. Randomized orders are
    /// re-seeded per edge from this seed and the edge's node pair.
    pub check_order: CheckOrder,
    pub time_limit: Option<Duration>,
    pub balance: Balance,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            w_t: 1.0,
            check_order: CheckOrder::Randomized(0),
            time_limit: None,
            balance: Balance::WallClock,
        }
    }
}

impl SearchParams {
    pub fn with_wt(w_t: f64) -> Self {
        Self { w_t, ..Self::default() }
    }

    fn deadline(&self, from: Instant) -> Option<Instant> {
        self.time_limit.map(|t| from + t)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub expansions: u64,
    pub astar_iterations: u64,
    pub forward_iterations: u64,
    pub backward_iterations: u64,
    /// Edge collision checks performed (cache hits included).
    pub edges_checked: u64,
    pub configs_checked: u64,
    pub deepest_layer_expanded: usize,
    pub deepest_layer_checked: usize,
    pub t_forward: Duration,
    pub t_backward: Duration,
    pub work_forward: u64,
    pub work_backward: u64,
    /// Longest single A* call.
    pub max_iteration: Duration,
    pub wall_time: Duration,
    /// Improving solutions found by anytime refinement after the first.
    pub refinements: u64,
    /// Layer that produced the answer, for layer-restricted planners.
    pub terminal_layer: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Path { configs: Vec<Config>, cost: f64 },
    NoPath,
    TimedOut,
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub outcome: Outcome,
    /// Layered vertex path behind a `Path` outcome, start to goal.
    pub vertices: Vec<VertexId>,
    pub stats: SearchStats,
    /// Edge states at the end of the query.
    pub edges: EdgeStateStore,
}

impl PlanResult {
    pub fn is_success(&self) -> bool {
        matches!(self.outcome, Outcome::Path { .. })
    }

    pub fn cost(&self) -> Option<f64> {
        match &self.outcome {
            Outcome::Path { cost, .. } => Some(*cost),
            _ => None,
        }
    }

    pub fn path(&self) -> Option<&[Config]> {
        match &self.outcome {
            Outcome::Path { configs, .. } => Some(configs),
            _ => None,
        }
    }
}

/// One A* call.
#[derive(Debug, Clone)]
pub struct AstarSpec {
    pub direction: Direction,
    pub heuristic: Heuristic,
    /// Restrict the search to one layer.
    pub layer: Option<usize>,
    /// Insert a vertex only if `g + h_x` is below this cost.
    pub prune_below: Option<f64>,
    /// Re-open closed vertices whose cost-to-come drops.
    pub reopen: bool,
    pub deadline: Option<Instant>,
    pub record_expansions: bool,
}

impl AstarSpec {
    pub fn new(direction: Direction, heuristic: Heuristic) -> Self {
        Self {
            direction,
            heuristic,
            layer: None,
            prune_below: None,
            reopen: false,
            deadline: None,
            record_expansions: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AstarOutcome {
    /// Vertices in search order (source first) and the `g` of the last one.
    Path {
        vertices: Vec<VertexId>,
        g_hat: f64,
    },
    NoPath,
    TimedOut,
}

#[derive(Debug, Clone)]
pub struct AstarRun {
    pub outcome: AstarOutcome,
    pub expansions: u64,
    pub deepest_layer_expanded: usize,
    /// `(vertex, g at expansion)` in expansion order, when requested.
    pub expanded: Vec<(VertexId, f64)>,
}

#[derive(Debug, Clone, Copy)]
struct OpenEntry {
    f: f64,
    g: f64,
    v: VertexId,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenEntry {
    // BinaryHeap pops the greatest: lowest f, then highest g, then the
    // smallest (layer, node).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(self.g.total_cmp(&other.g))
            .then(other.v.cmp(&self.v))
    }
}

const NO_PARENT: VertexId = VertexId { layer: 0, node: 0 };

/// Reusable A* state over dense vertex indices; a generation stamp makes
/// resetting between calls O(1).
#[derive(Debug, Default)]
pub struct Astar {
    g: Vec<f64>,
    parent: Vec<VertexId>,
    closed: Vec<bool>,
    stamp: Vec<u32>,
    generation: u32,
    open: BinaryHeap<OpenEntry>,
}

impl Astar {
    pub fn new() -> Self {
        Self::default()
    }

    fn reset(&mut self, size: usize) {
        if self.stamp.len() != size || self.generation == u32::MAX {
            self.g = vec![f64::INFINITY; size];
            self.parent = vec![NO_PARENT; size];
            self.closed = vec![false; size];
            self.stamp = vec![0; size];
            self.generation = 0;
        }
        self.generation += 1;
        self.open.clear();
    }

    fn touch(&mut self, i: usize) {
        if self.stamp[i] != self.generation {
            self.stamp[i] = self.generation;
            self.g[i] = f64::INFINITY;
            self.parent[i] = NO_PARENT;
            self.closed[i] = false;
        }
    }

    /// Best-first search over the graph with unknown edges assumed valid and
    /// invalid edges skipped. A vertex whose cost-to-come drops after it was
    /// closed keeps the lower cost and new parent but is not re-inserted,
    /// unless `spec.reopen` is set.
    pub fn run(&mut self, graph: &LayeredGraph, store: &EdgeStateStore, spec: &AstarSpec) -> AstarRun {
        let (source, target_node) = match spec.direction {
            Direction::Forward => (START, GOAL),
            Direction::Backward => (GOAL, START),
        };
        let target: Vec<f64> = graph.config_of(target_node).to_vec();
        let counts = graph.counts().to_vec();
        let heuristic = spec.heuristic;
        let priority = |v: VertexId, g: f64, hx: f64| -> f64 {
            match heuristic {
                Heuristic::SelectiveDensification { w_t } => g + hx * epsilon(w_t, counts[v.layer - 1]),
                Heuristic::Weighted { epsilon } => g + epsilon * hx,
                Heuristic::Greedy => hx,
            }
        };
        self.reset(graph.vertex_count());
        let mut run = AstarRun {
            outcome: AstarOutcome::NoPath,
            expansions: 0,
            deepest_layer_expanded: 0,
            expanded: Vec::new(),
        };
        let layers: Vec<usize> = match spec.layer {
            Some(l) => vec![l],
            None => (1..=graph.depth()).collect(),
        };
        let hx_source = h_x(graph.config_of(source), &target);
        for &l in &layers {
            let v = VertexId::new(l, source);
            let i = graph.vertex_index(v);
            self.touch(i);
            self.g[i] = 0.0;
            if spec.prune_below.is_none_or(|b| hx_source < b) {
                self.open.push(OpenEntry {
                    f: priority(v, 0.0, hx_source),
                    g: 0.0,
                    v,
                });
            }
        }
        while let Some(entry) = self.open.pop() {
            let v = entry.v;
            let i = graph.vertex_index(v);
            if self.closed[i] || entry.g != self.g[i] {
                continue;
            }
            if run.expansions.is_multiple_of(256) {
                if let Some(d) = spec.deadline {
                    if Instant::now() >= d {
                        run.outcome = AstarOutcome::TimedOut;
                        return run;
                    }
                }
            }
            self.closed[i] = true;
            run.expansions += 1;
            run.deepest_layer_expanded = run.deepest_layer_expanded.max(v.layer);
            let gv = self.g[i];
            if spec.record_expansions {
                run.expanded.push((v, gv));
            }
            if v.node == target_node {
                run.outcome = AstarOutcome::Path {
                    vertices: self.reconstruct(graph, v),
                    g_hat: gv,
                };
                return run;
            }
            graph.visit_neighbors(v, |to, kind, cost| {
                if spec.layer.is_some_and(|l| to.layer != l) {
                    return;
                }
                if kind == EdgeKind::WithinLayer && store.get(v.node, to.node) == EdgeState::Invalid {
                    return;
                }
                let j = graph.vertex_index(to);
                self.touch(j);
                let g_new = gv + cost;
                if self.g[j] <= g_new {
                    return;
                }
                self.g[j] = g_new;
                self.parent[j] = v;
                if self.closed[j] {
                    if !spec.reopen {
                        return;
                    }
                    self.closed[j] = false;
                }
                let hx = h_x(graph.config_of(to.node), &target);
                if spec.prune_below.is_some_and(|b| g_new + hx >= b) {
                    return;
                }
                self.open.push(OpenEntry {
                    f: priority(to, g_new, hx),
                    g: g_new,
                    v: to,
                });
            });
        }
        run
    }

    fn reconstruct(&self, graph: &LayeredGraph, end: VertexId) -> Vec<VertexId> {
        let mut path = vec![end];
        let mut v = end;
        loop {
            let p = self.parent[graph.vertex_index(v)];
            if p == NO_PARENT {
                break;
            }
            path.push(p);
            v = p;
        }
        path.reverse();
        path
    }
}

/// One-shot A* call with fresh state.
pub fn astar_optimistic(graph: &LayeredGraph, store: &EdgeStateStore, spec: &AstarSpec) -> AstarRun {
    Astar::new().run(graph, store, spec)
}

fn edge_seed(base: u64, a: NodeId, b: NodeId) -> u64 {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    mix64(base ^ mix64(((a as u64) << 32) | b as u64))
}

/// Collision-checks the unknown within-layer edges of `path` in path order.
/// The first colliding edge is marked invalid and ends the pass; edges that
/// pass are marked valid. Returns whether every edge is valid.
pub fn check_edges(
    world: &mut CollisionWorld,
    graph: &LayeredGraph,
    store: &mut EdgeStateStore,
    path: &[VertexId],
    order: CheckOrder,
) -> Result<bool, WorldError> {
    check_edges_tracked(world, graph, store, path, order, &mut 0)
}

fn check_edges_tracked(
    world: &mut CollisionWorld,
    graph: &LayeredGraph,
    store: &mut EdgeStateStore,
    path: &[VertexId],
    order: CheckOrder,
    deepest_checked: &mut usize,
) -> Result<bool, WorldError> {
    for w in path.windows(2) {
        let (u, v) = (w[0], w[1]);
        if u.node == v.node {
            continue;
        }
        match store.get(u.node, v.node) {
            EdgeState::Valid => continue,
            EdgeState::Invalid => return Ok(false),
            EdgeState::Unknown => {}
        }
        let order = match order {
            CheckOrder::InOrder => CheckOrder::InOrder,
            CheckOrder::Randomized(seed) => CheckOrder::Randomized(edge_seed(seed, u.node, v.node)),
        };
        let q1 = Config::new(graph.config_of(u.node).to_vec());
        let q2 = Config::new(graph.config_of(v.node).to_vec());
        let valid = world.check_edge(&q1, &q2, order)?;
        *deepest_checked = (*deepest_checked).max(u.layer);
        if valid {
            store.set(u.node, v.node, EdgeState::Valid);
        } else {
            store.set(u.node, v.node, EdgeState::Invalid);
            return Ok(false);
        }
    }
    Ok(true)
}

/// Configurations along a layered path with vertical hops removed.
pub fn path_configs(graph: &LayeredGraph, path: &[VertexId]) -> Vec<Config> {
    let mut out: Vec<Config> = Vec::with_capacity(path.len());
    let mut last: Option<NodeId> = None;
    for v in path {
        if last != Some(v.node) {
            out.push(Config::new(graph.config_of(v.node).to_vec()));
            last = Some(v.node);
        }
    }
    out
}

/// How the lazy loop picks the direction of each A* call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum DirectionRule {
    Forward,
    Balanced(Balance),
    Alternating,
}

pub(crate) struct LoopSpec {
    pub heuristic: Heuristic,
    pub layer: Option<usize>,
    pub prune_below: Option<f64>,
    pub reopen: bool,
    pub rule: DirectionRule,
}

pub(crate) enum LoopOutcome {
    Path(Vec<VertexId>),
    NoPath,
    TimedOut,
}

/// Per-query planner state: graph with the query inserted, edge store,
/// A* scratch and accumulated statistics.
pub(crate) struct Query<'a> {
    pub world: &'a mut CollisionWorld,
    pub graph: &'a LayeredGraph,
    pub store: EdgeStateStore,
    pub astar: Astar,
    pub stats: SearchStats,
    pub order: CheckOrder,
    pub deadline: Option<Instant>,
    pub started: Instant,
    edges_before: u64,
    configs_before: u64,
}

impl<'a> Query<'a> {
    pub fn new(world: &'a mut CollisionWorld, graph: &'a LayeredGraph, params: &SearchParams) -> Self {
        let started = Instant::now();
        let edges_before = world.edge_check_count();
        let configs_before = world.config_check_count();
        Self {
            world,
            graph,
            store: EdgeStateStore::new(),
            astar: Astar::new(),
            stats: SearchStats::default(),
            order: params.check_order,
            deadline: params.deadline(started),
            started,
            edges_before,
            configs_before,
        }
    }

    fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Alternates A* and edge checking until a fully valid path, `NoPath`,
    /// or the deadline.
    pub fn lazy_loop(&mut self, spec: &LoopSpec) -> Result<LoopOutcome, WorldError> {
        let mut next_backward = false;
        loop {
            if self.timed_out() {
                return Ok(LoopOutcome::TimedOut);
            }
            let direction = match spec.rule {
                DirectionRule::Forward => Direction::Forward,
                DirectionRule::Alternating => {
                    let d = if next_backward {
                        Direction::Backward
                    } else {
                        Direction::Forward
                    };
                    next_backward = !next_backward;
                    d
                }
                DirectionRule::Balanced(Balance::WallClock) => {
                    if self.stats.t_forward <= self.stats.t_backward {
                        Direction::Forward
                    } else {
                        Direction::Backward
                    }
                }
                DirectionRule::Balanced(Balance::Work) => {
                    if self.stats.work_forward <= self.stats.work_backward {
                        Direction::Forward
                    } else {
                        Direction::Backward
                    }
                }
            };
            let astar_spec = AstarSpec {
                direction,
                heuristic: spec.heuristic,
                layer: spec.layer,
                prune_below: spec.prune_below,
                reopen: spec.reopen,
                deadline: self.deadline,
                record_expansions: false,
            };
            let t0 = Instant::now();
            let run = self.astar.run(self.graph, &self.store, &astar_spec);
            let dt = t0.elapsed();
            let st = &mut self.stats;
            st.astar_iterations += 1;
            st.expansions += run.expansions;
            st.deepest_layer_expanded = st.deepest_layer_expanded.max(run.deepest_layer_expanded);
            st.max_iteration = st.max_iteration.max(dt);
            match direction {
                Direction::Forward => {
                    st.forward_iterations += 1;
                    st.t_forward += dt;
                    st.work_forward += run.expansions;
                }
                Direction::Backward => {
                    st.backward_iterations += 1;
                    st.t_backward += dt;
                    st.work_backward += run.expansions;
                }
            }
            let mut path = match run.outcome {
                AstarOutcome::Path { vertices, .. } => vertices,
                AstarOutcome::NoPath => return Ok(LoopOutcome::NoPath),
                AstarOutcome::TimedOut => return Ok(LoopOutcome::TimedOut),
            };
            if direction == Direction::Backward {
                path.reverse();
            }
            let valid = check_edges_tracked(
                self.world,
                self.graph,
                &mut self.store,
                &path,
                self.order,
                &mut self.stats.deepest_layer_checked,
            )?;
            if valid {
                return Ok(LoopOutcome::Path(path));
            }
        }
    }

    pub fn finish(mut self, outcome: Outcome, vertices: Vec<VertexId>) -> PlanResult {
        self.stats.edges_checked = self.world.edge_check_count() - self.edges_before;
        self.stats.configs_checked = self.world.config_check_count() - self.configs_before;
        self.stats.wall_time = self.started.elapsed();
        PlanResult {
            outcome,
            vertices,
            stats: self.stats,
            edges: self.store,
        }
    }

    pub fn path_outcome(&self, path: &[VertexId]) -> Outcome {
        let configs = path_configs(self.graph, path);
        let cost = path_cost(&configs);
        Outcome::Path { configs, cost }
    }
}

/// Validates the endpoints and inserts the query. Returns `None` after
/// insertion, or the trivial result for a degenerate query.
pub(crate) fn prepare(
    world: &mut CollisionWorld,
    graph: &mut LayeredGraph,
    q_s: &Config,
    q_g: &Config,
) -> Result<Option<PlanResult>, PlanError> {
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
    if graph.dims() != q_s.dims() {
        return Err(GraphError::DimensionMismatch {
            expected: graph.dims(),
            got: q_s.dims(),
        }
        .into());
    }
    if q_s == q_g {
        return Ok(Some(PlanResult {
            outcome: Outcome::Path {
                configs: vec![q_s.clone()],
                cost: 0.0,
            },
            vertices: Vec::new(),
            stats: SearchStats::default(),
            edges: EdgeStateStore::new(),
        }));
    }
    graph.insert_query(q_s, q_g)?;
    Ok(None)
}

pub(crate) fn run_loop(
    world: &mut CollisionWorld,
    graph: &mut LayeredGraph,
    q_s: &Config,
    q_g: &Config,
    params: &SearchParams,
    spec: LoopSpec,
) -> Result<PlanResult, PlanError> {
    if let Some(trivial) = prepare(world, graph, q_s, q_g)? {
        return Ok(trivial);
    }
    let graph: &LayeredGraph = graph;
    let mut query = Query::new(world, graph, params);
    let (outcome, vertices) = match query.lazy_loop(&spec)? {
        LoopOutcome::Path(p) => (query.path_outcome(&p), p),
        LoopOutcome::NoPath => (Outcome::NoPath, Vec::new()),
        LoopOutcome::TimedOut => (Outcome::TimedOut, Vec::new()),
    };
    Ok(query.finish(outcome, vertices))
}

/// Unidirectional lazy search with the selective-densification heuristic.
pub fn plan_sd(
    world: &mut CollisionWorld,
    graph: &mut LayeredGraph,
    q_s: &Config,
    q_g: &Config,
    params: &SearchParams,
) -> Result<PlanResult, PlanError> {
    let spec = LoopSpec {
        heuristic: Heuristic::SelectiveDensification { w_t: params.w_t },
        layer: None,
        prune_below: None,
        reopen: false,
        rule: DirectionRule::Forward,
    };
    run_loop(world, graph, q_s, q_g, params, spec)
}

/// Bidirectional lazy search: each iteration runs forward when the forward
/// direction has accumulated no more A* time (or work) than the backward.
pub fn plan_sd_bidirectional(
    world: &mut CollisionWorld,
    graph: &mut LayeredGraph,
    q_s: &Config,
    q_g: &Config,
    params: &SearchParams,
) -> Result<PlanResult, PlanError> {
    let spec = LoopSpec {
        heuristic: Heuristic::SelectiveDensification { w_t: params.w_t },
        layer: None,
        prune_below: None,
        reopen: false,
        rule: DirectionRule::Balanced(params.balance),
    };
    run_loop(world, graph, q_s, q_g, params, spec)
}

/// Bidirectional lazy search that flips direction every iteration.
pub fn plan_sd_alternating(
    world: &mut CollisionWorld,
    graph: &mut LayeredGraph,
    q_s: &Config,
    q_g: &Config,
    params: &SearchParams,
) -> Result<PlanResult, PlanError> {
    let spec = LoopSpec {
        heuristic: Heuristic::SelectiveDensification { w_t: params.w_t },
        layer: None,
        prune_below: None,
        reopen: false,
        rule: DirectionRule::Alternating,
    };
    run_loop(world, graph, q_s, q_g, params, spec)
}

/// Runs [`plan_sd`], then repeats the lazy loop keeping only vertices with
/// `g + h_x` below the best cost so far, until `budget` (if any, measured
/// from the start of the query) expires or no improving path remains.
/// Refinement passes re-open closed vertices so that an empty open list
/// certifies the best path as optimal on the graph.
pub fn plan_sd_anytime(
    world: &mut CollisionWorld,
    graph: &mut LayeredGraph,
    q_s: &Config,
    q_g: &Config,
    params: &SearchParams,
    budget: Option<Duration>,
) -> Result<PlanResult, PlanError> {
    if let Some(trivial) = prepare(world, graph, q_s, q_g)? {
        return Ok(trivial);
    }
    let graph: &LayeredGraph = graph;
    let mut query = Query::new(world, graph, params);
    let budget_end = budget.map(|b| query.started + b);
    let hard_deadline = query.deadline;
    let mut spec = LoopSpec {
        heuristic: Heuristic::SelectiveDensification { w_t: params.w_t },
        layer: None,
        prune_below: None,
        reopen: false,
        rule: DirectionRule::Forward,
    };
    let mut best: Option<(Vec<VertexId>, f64)> = None;
    loop {
        match query.lazy_loop(&spec)? {
            LoopOutcome::Path(p) => {
                let cost = path_cost(&path_configs(graph, &p));
                if best.is_some() {
                    query.stats.refinements += 1;
                }
                debug_assert!(best.as_ref().is_none_or(|(_, c)| cost < *c));
                best = Some((p, cost));
                spec.prune_below = Some(cost);
                spec.reopen = true;
                // The budget bounds refinement only; the first solve runs as plan_sd.
                query.deadline = match (hard_deadline, budget_end) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
            }
            LoopOutcome::NoPath => break,
            LoopOutcome::TimedOut => break,
        }
    }
    let timed_out = query.timed_out();
    match best {
        Some((p, _)) => {
            let outcome = query.path_outcome(&p);
            Ok(query.finish(outcome, p))
        }
        None if timed_out => Ok(query.finish(Outcome::TimedOut, Vec::new())),
        None => Ok(query.finish(Outcome::NoPath, Vec::new())),
    }
}

/// True when `v` is a copy of the start or goal.
pub fn is_query_vertex(v: VertexId) -> bool {
    is_sentinel(v.node)
}
