//! Checks of the planner's guarantees against the brute-force oracle. Each
//! returns how many non-vacuous comparisons it made and every violation.

use sdplan_core::graph::{EdgeState, VertexId};
use sdplan_core::search::{astar_optimistic, check_edges, epsilon, AstarOutcome, AstarSpec, Direction, Heuristic};
use sdplan_core::world::CheckOrder;
use sdplan_core::{plan_sd, Config, EdgeStateStore, PlanResult, SearchParams};

use super::{optimistic, Instance, OracleGraph, TruthTable};

pub const TOL: f64 = 1e-9;

#[derive(Debug, Default)]
pub struct Check {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl Check {
    pub fn merge(&mut self, other: Check) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    pub fn fail(&mut self, msg: String) {
        self.violations.push(msg);
    }
}

fn all_layers(o: &OracleGraph) -> Vec<usize> {
    (1..=o.depth()).collect()
}

pub fn params(w_t: f64) -> SearchParams {
    SearchParams {
        w_t,
        check_order: CheckOrder::InOrder,
        ..SearchParams::default()
    }
}

/// Returned cost against `eps_i` times every layer's optimum.
pub fn bounded_suboptimality(inst: &mut Instance, w_t: f64) -> (Check, PlanResult) {
    let r = plan_sd(&mut inst.world, &mut inst.graph, &inst.start, &inst.goal, &params(w_t)).unwrap();
    let oracle = OracleGraph::from_graph(&inst.graph);
    let mut truth = TruthTable::new(&inst.world, &oracle);
    let mut check = Check::default();
    for i in 1..=oracle.depth() {
        let opt = oracle
            .dijkstra(&[i], &mut |a, b| truth.valid(a, b))
            .get(i, oracle.goal());
        if !opt.is_finite() {
            continue;
        }
        check.checked += 1;
        let bound = epsilon(w_t, oracle.counts[i - 1]) * opt + TOL;
        match r.cost() {
            Some(c) if c <= bound => {}
            Some(c) => check.fail(format!("w_t {w_t} layer {i}: cost {c} > bound {bound}")),
            None => check.fail(format!(
                "w_t {w_t} layer {i} feasible (opt {opt}) but planner returned {:?}",
                r.outcome
            )),
        }
    }
    (check, r)
}

/// At `w_t = 0` the returned cost is the layered-graph optimum.
pub fn optimality_at_zero(inst: &mut Instance) -> (Check, PlanResult) {
    let r = plan_sd(&mut inst.world, &mut inst.graph, &inst.start, &inst.goal, &params(0.0)).unwrap();
    let oracle = OracleGraph::from_graph(&inst.graph);
    let mut truth = TruthTable::new(&inst.world, &oracle);
    let layers = all_layers(&oracle);
    let opt = oracle
        .dijkstra(&layers, &mut |a, b| truth.valid(a, b))
        .best(oracle.goal(), &layers);
    let mut check = Check {
        checked: 1,
        ..Check::default()
    };
    match (r.cost(), opt.is_finite()) {
        (Some(c), true) if (c - opt).abs() <= TOL => {}
        (None, false) => {}
        (c, _) => check.fail(format!("cost {c:?} vs optimum {opt}")),
    }
    (check, r)
}

/// Returned path edges re-validate and every stored state matches the world.
pub fn lazy_soundness(inst: &Instance, result: &PlanResult) -> Check {
    let oracle = OracleGraph::from_graph(&inst.graph);
    let mut truth = TruthTable::new(&inst.world, &oracle);
    let mut check = Check::default();
    if let Some(path) = result.path() {
        let mut w = inst.world.fork();
        for seg in path.windows(2) {
            check.checked += 1;
            if !w.is_edge_valid(&seg[0], &seg[1], CheckOrder::InOrder).unwrap() {
                check.fail(format!("returned edge {:?} -> {:?} collides", seg[0], seg[1]));
            }
        }
        for seg in result.vertices.windows(2) {
            if seg[0].node != seg[1].node && result.edges.get(seg[0].node, seg[1].node) != EdgeState::Valid {
                check.fail(format!("path edge {:?} not marked valid", seg));
            }
        }
    }
    for ((a, b), state) in result.edges.iter() {
        check.checked += 1;
        let t = truth.valid(oracle.index_of(a), oracle.index_of(b));
        if t != (state == EdgeState::Valid) {
            check.fail(format!("edge ({a}, {b}) stored {state:?}, world says valid={t}"));
        }
    }
    check
}

/// Runs the lazy loop by hand, calling `inspect` with the store as A* saw
/// it and the expansions of each call.
fn manual_lazy_loop(
    inst: &mut Instance,
    spec: &AstarSpec,
    mut inspect: impl FnMut(&EdgeStateStore, &[(VertexId, f64)]),
) {
    let mut store = EdgeStateStore::new();
    for _ in 0..100_000 {
        let run = astar_optimistic(&inst.graph, &store, spec);
        inspect(&store, &run.expanded);
        let path = match run.outcome {
            AstarOutcome::Path { vertices, .. } => vertices,
            _ => return,
        };
        if check_edges(&mut inst.world, &inst.graph, &mut store, &path, CheckOrder::InOrder).unwrap() {
            return;
        }
    }
    panic!("lazy loop did not terminate");
}

/// Single-layer A*: every expansion has `g <= eps_i * g*` on the
/// optimistic layer graph of that iteration.
pub fn g_bound_single_layer(inst: &mut Instance, w_t: f64, layer: usize) -> Check {
    let oracle = OracleGraph::from_graph(&inst.graph);
    let eps = epsilon(w_t, oracle.counts[layer - 1]);
    let mut spec = AstarSpec::new(Direction::Forward, Heuristic::SelectiveDensification { w_t });
    spec.layer = Some(layer);
    spec.record_expansions = true;
    let mut check = Check::default();
    manual_lazy_loop(inst, &spec, |store, expanded| {
        let valid = optimistic(store, &oracle);
        let g_star = oracle.dijkstra(&[layer], &mut |a, b| valid(a, b));
        for &(v, g) in expanded {
            check.checked += 1;
            let gs = g_star.get(layer, oracle.index_of(v.node));
            if g > eps * gs + TOL {
                check.fail(format!("layer {layer} w_t {w_t}: {v:?} g {g} > {eps} * {gs}"));
            }
        }
    });
    check
}

/// Full-graph A*: every expansion on layer `i` has `g <= eps_i * g*_i`,
/// where `g*_i` is the optimum within layer `i` alone.
pub fn g_bound_full_graph(inst: &mut Instance, w_t: f64) -> Check {
    let oracle = OracleGraph::from_graph(&inst.graph);
    let mut spec = AstarSpec::new(Direction::Forward, Heuristic::SelectiveDensification { w_t });
    spec.record_expansions = true;
    let mut check = Check::default();
    manual_lazy_loop(inst, &spec, |store, expanded| {
        let valid = optimistic(store, &oracle);
        let per_layer: Vec<_> = (1..=oracle.depth())
            .map(|i| oracle.dijkstra(&[i], &mut |a, b| valid(a, b)))
            .collect();
        for &(v, g) in expanded {
            let gs = per_layer[v.layer - 1].get(v.layer, oracle.index_of(v.node));
            if !gs.is_finite() {
                continue;
            }
            check.checked += 1;
            let eps = epsilon(w_t, oracle.counts[v.layer - 1]);
            if g > eps * gs + TOL {
                check.fail(format!("w_t {w_t}: {v:?} g {g} > {eps} * {gs}"));
            }
        }
    });
    check
}

/// Deepest expanded layer against `min { j : eps_j >= eps_i c(xi_i) / delta }`
/// for each layer `i` whose optimal valid path has clearance `delta` with
/// `delta < r_j`. Returns the result and how many bounds were below `D`.
pub fn depth_bound(inst: &mut Instance, w_t: f64, max_layer: usize) -> (Check, usize) {
    let r = plan_sd(&mut inst.world, &mut inst.graph, &inst.start, &inst.goal, &params(w_t)).unwrap();
    let deepest = r.stats.deepest_layer_expanded;
    let oracle = OracleGraph::from_graph(&inst.graph);
    let mut truth = TruthTable::new(&inst.world, &oracle);
    let mut check = Check::default();
    let mut binding = 0;
    let step = inst.world.check_step();
    for i in 1..=max_layer.min(oracle.depth()) {
        let dist = oracle.dijkstra(&[i], &mut |a, b| truth.valid(a, b));
        if !dist.get(i, oracle.goal()).is_finite() {
            continue;
        }
        let path: Vec<Config> = dist
            .path_to(i, oracle.goal())
            .into_iter()
            .map(|k| Config::new(oracle.configs[k].clone()))
            .collect();
        let cost = sdplan_core::path_cost(&path);
        // Clearance is 1-Lipschitz, so between samples it can drop by at
        // most half a step.
        let delta = inst.world.path_clearance(&path).unwrap() - step / 2.0;
        if delta <= 0.0 {
            continue;
        }
        let target = epsilon(w_t, oracle.counts[i - 1]) * cost / delta;
        let Some(j) = (1..=oracle.depth()).find(|&j| epsilon(w_t, oracle.counts[j - 1]) >= target) else {
            continue;
        };
        if delta >= oracle.radii[j - 1] {
            continue;
        }
        check.checked += 1;
        if j < oracle.depth() {
            binding += 1;
        }
        if deepest > j {
            check.fail(format!(
                "w_t {w_t} layer {i}: cost {cost} clearance {delta} bound L{j}, deepest expanded L{deepest}"
            ));
        }
    }
    (check, binding)
}
