mod common;

use std::time::Duration;

use common::theory::{self, Check, TOL};
use common::{random_instance, world_from_rects, Instance, OracleGraph, TruthTable};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdplan_core::baselines::{plan_baseline_graph, plan_iterative_deepening, GraphBaseline};
use sdplan_core::graph::{EdgeState, VertexId, GOAL, START};
use sdplan_core::search::{astar_optimistic, plan_sd_alternating, AstarOutcome, AstarSpec, Direction, Heuristic};
use sdplan_core::world::CellRect;
use sdplan_core::{
    plan_sd, plan_sd_anytime, plan_sd_bidirectional, Balance, Config, EdgeStateStore, HaltonSource, LayeredGraph,
    Outcome, SearchParams,
};

fn assert_clean(check: &Check) {
    assert!(check.violations.is_empty(), "{:#?}", check.violations);
}

#[test]
fn line_graph_matches_dijkstra() {
    // One roadmap node at (0.5, 1/3); start and goal 0.25 to either side,
    // radius 0.3, so the only route is start -> node -> goal.
    let src = HaltonSource::with_offset(vec![0.0, 0.0]);
    let degree = 0.09 * std::f64::consts::PI;
    let mut g = LayeredGraph::build_with_counts(&src, vec![1], degree, usize::MAX);
    assert!((g.radius(1) - 0.3).abs() < 1e-12);
    let third = 1.0 / 3.0;
    g.insert_query(&Config::new(vec![0.25, third]), &Config::new(vec![0.75, third]))
        .unwrap();
    let run = astar_optimistic(
        &g,
        &EdgeStateStore::new(),
        &AstarSpec::new(Direction::Forward, Heuristic::admissible()),
    );
    match run.outcome {
        AstarOutcome::Path { vertices, g_hat } => {
            assert_eq!(
                vertices,
                vec![VertexId::new(1, START), VertexId::new(1, 0), VertexId::new(1, GOAL)]
            );
            assert!((g_hat - 0.5).abs() < 1e-12);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn invalid_goal_edges_give_no_path() {
    let mut g = LayeredGraph::build(&HaltonSource::new(2, 4), 5, 30.0);
    g.insert_query(&Config::new(vec![0.1, 0.1]), &Config::new(vec![0.8, 0.7]))
        .unwrap();
    let mut store = EdgeStateStore::new();
    for layer in 1..=g.depth() {
        for (e, to) in g.neighbors(VertexId::new(layer, GOAL)) {
            if to.node != GOAL {
                store.set_state(&e, EdgeState::Invalid);
            }
        }
    }
    for h in [
        Heuristic::admissible(),
        Heuristic::SelectiveDensification { w_t: 1.0 },
        Heuristic::Greedy,
    ] {
        let run = astar_optimistic(&g, &store, &AstarSpec::new(Direction::Forward, h));
        assert_eq!(run.outcome, AstarOutcome::NoPath);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn admissible_astar_matches_dijkstra_on_optimistic_graph(seed in any::<u64>(), invalid_frac in 0.0f64..0.6) {
        let mut inst = random_instance(seed, 1, 0);
        inst.graph = LayeredGraph::build_with_counts(&HaltonSource::new(2, seed), vec![16, 64], 30.0, usize::MAX);
        inst.graph.insert_query(&inst.start, &inst.goal).unwrap();
        let oracle = OracleGraph::from_graph(&inst.graph);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut store = EdgeStateStore::new();
        for layer in 1..=2 {
            for a in oracle.members(layer) {
                for b in oracle.within_neighbors(layer, a) {
                    if a < b && store.get(oracle.node_id(a), oracle.node_id(b)) == EdgeState::Unknown && rng.gen::<f64>() < invalid_frac {
                        store.set(oracle.node_id(a), oracle.node_id(b), EdgeState::Invalid);
                    }
                }
            }
        }
        let valid = common::optimistic(&store, &oracle);
        let layers = [1usize, 2];
        let expected = oracle.dijkstra(&layers, &mut |a, b| valid(a, b)).best(oracle.goal(), &layers);
        let run = astar_optimistic(&inst.graph, &store, &AstarSpec::new(Direction::Forward, Heuristic::admissible()));
        match run.outcome {
            AstarOutcome::Path { vertices, g_hat } => {
                prop_assert!((g_hat - expected).abs() <= TOL, "{} vs {}", g_hat, expected);
                let cost = sdplan_core::path_cost(&sdplan_core::search::path_configs(&inst.graph, &vertices));
                prop_assert!((cost - expected).abs() <= TOL);
            }
            AstarOutcome::NoPath => prop_assert!(expected.is_infinite()),
            AstarOutcome::TimedOut => unreachable!(),
        }
    }
}

#[test]
fn guarantees_hold_on_random_instances() {
    let mut sub = Check::default();
    let mut opt = Check::default();
    let mut sound = Check::default();
    let mut full = Check::default();
    for seed in 0..30u64 {
        for w_t in [0.0, 0.1, 1.0] {
            let mut inst = random_instance(seed, 6, 6);
            let (c, r) = theory::bounded_suboptimality(&mut inst, w_t);
            sub.merge(c);
            sound.merge(theory::lazy_soundness(&inst, &r));
            let mut inst = random_instance(seed, 6, 6);
            full.merge(theory::g_bound_full_graph(&mut inst, w_t));
        }
        let mut inst = random_instance(seed, 6, 6);
        let (c, r) = theory::optimality_at_zero(&mut inst);
        opt.merge(c);
        sound.merge(theory::lazy_soundness(&inst, &r));
    }
    for c in [&sub, &opt, &sound, &full] {
        assert_clean(c);
        assert!(c.checked > 0);
    }
}

#[test]
fn single_layer_g_bound() {
    let mut check = Check::default();
    for seed in 0..20u64 {
        for w_t in [0.0, 0.1, 1.0] {
            for layer in [2, 4, 6] {
                let mut inst = random_instance(seed, 6, 6);
                check.merge(theory::g_bound_single_layer(&mut inst, w_t, layer));
            }
        }
    }
    assert_clean(&check);
    assert!(check.checked > 1000);
}

#[test]
fn depth_bound_on_open_worlds() {
    let mut check = Check::default();
    let mut binding = 0;
    for seed in 0..12u64 {
        let mut inst = random_instance(1000 + seed, 10, 3);
        let (c, b) = theory::depth_bound(&mut inst, 1.0, 7);
        check.merge(c);
        binding += b;
    }
    assert_clean(&check);
    assert!(binding > 0);
}

fn strip_times(mut s: sdplan_core::SearchStats) -> sdplan_core::SearchStats {
    s.t_forward = Duration::ZERO;
    s.t_backward = Duration::ZERO;
    s.max_iteration = Duration::ZERO;
    s.wall_time = Duration::ZERO;
    s
}

#[test]
fn planners_are_deterministic() {
    for seed in 0..6u64 {
        let params = SearchParams {
            balance: Balance::Work,
            ..SearchParams::with_wt(0.5)
        };
        let runs = |inst: &mut Instance| {
            let (s, g) = (inst.start.clone(), inst.goal.clone());
            vec![
                plan_sd(&mut inst.world, &mut inst.graph, &s, &g, &params).unwrap(),
                plan_sd_bidirectional(&mut inst.world, &mut inst.graph, &s, &g, &params).unwrap(),
                plan_sd_alternating(&mut inst.world, &mut inst.graph, &s, &g, &params).unwrap(),
                plan_iterative_deepening(&mut inst.world, &mut inst.graph, &s, &g, &params).unwrap(),
                plan_baseline_graph(GraphBaseline::Greedy, &mut inst.world, &mut inst.graph, &s, &g, &params).unwrap(),
            ]
        };
        let a = runs(&mut random_instance(seed, 7, 6));
        let b = runs(&mut random_instance(seed, 7, 6));
        for (x, y) in a.into_iter().zip(b) {
            assert_eq!(x.outcome, y.outcome);
            assert_eq!(x.vertices, y.vertices);
            assert_eq!(strip_times(x.stats), strip_times(y.stats));
            assert_eq!(x.edges.iter(), y.edges.iter());
        }
    }
}

#[test]
fn bidirectional_time_balance() {
    for seed in 0..10u64 {
        let mut inst = random_instance(seed, 8, 6);
        let (s, g) = (inst.start.clone(), inst.goal.clone());
        let r = plan_sd_bidirectional(&mut inst.world, &mut inst.graph, &s, &g, &SearchParams::with_wt(0.1)).unwrap();
        let st = &r.stats;
        assert!(st.t_forward.abs_diff(st.t_backward) <= st.max_iteration, "{st:?}");
        assert_eq!(st.forward_iterations + st.backward_iterations, st.astar_iterations);
        let check = theory::lazy_soundness(&inst, &r);
        assert_clean(&check);
    }
}

#[test]
fn anytime_reaches_graph_optimum() {
    let mut improved = 0;
    for seed in 0..15u64 {
        let mut inst = random_instance(seed, 6, 6);
        let (s, g) = (inst.start.clone(), inst.goal.clone());
        let params = theory::params(1.0);
        let first = plan_sd(&mut inst.world, &mut inst.graph, &s, &g, &params).unwrap();
        let zero = plan_sd_anytime(&mut inst.world, &mut inst.graph, &s, &g, &params, Some(Duration::ZERO)).unwrap();
        assert_eq!(first.outcome, zero.outcome);
        let full = plan_sd_anytime(&mut inst.world, &mut inst.graph, &s, &g, &params, None).unwrap();
        let oracle = OracleGraph::from_graph(&inst.graph);
        let mut truth = TruthTable::new(&inst.world, &oracle);
        let layers: Vec<usize> = (1..=oracle.depth()).collect();
        let opt = oracle
            .dijkstra(&layers, &mut |a, b| truth.valid(a, b))
            .best(oracle.goal(), &layers);
        match (first.cost(), full.cost()) {
            (Some(c1), Some(c2)) => {
                assert!(c2 <= c1 + TOL);
                assert!((c2 - opt).abs() <= TOL, "anytime {c2} vs optimum {opt}");
                if c2 < c1 - 1e-6 {
                    improved += 1;
                }
            }
            (None, None) => assert!(opt.is_infinite()),
            other => panic!("{other:?}"),
        }
        assert_clean(&theory::lazy_soundness(&inst, &full));
    }
    assert!(improved > 0);
}

#[test]
fn baselines_respect_their_bounds() {
    for seed in 0..25u64 {
        let mut inst = random_instance(seed, 6, 6);
        let (s, g) = (inst.start.clone(), inst.goal.clone());
        let params = theory::params(0.0);
        let oracle = OracleGraph::from_graph(&inst.graph);
        let mut truth = TruthTable::new(&inst.world, &oracle);
        let layers: Vec<usize> = (1..=oracle.depth()).collect();
        let opt = oracle
            .dijkstra(&layers, &mut |a, b| truth.valid(a, b))
            .best(oracle.goal(), &layers);
        let sd0 = plan_sd(&mut inst.world, &mut inst.graph, &s, &g, &params).unwrap();
        let astar = plan_baseline_graph(
            GraphBaseline::AstarAdmissible,
            &mut inst.world,
            &mut inst.graph,
            &s,
            &g,
            &params,
        )
        .unwrap();
        assert_eq!(sd0.cost(), astar.cost());
        for eps in [1.5, 4.0] {
            let w = plan_baseline_graph(
                GraphBaseline::WeightedAstar { epsilon: eps },
                &mut inst.world,
                &mut inst.graph,
                &s,
                &g,
                &params,
            )
            .unwrap();
            match w.cost() {
                Some(c) => assert!(c <= eps * opt + TOL),
                None => assert!(opt.is_infinite()),
            }
            assert_clean(&theory::lazy_soundness(&inst, &w));
        }
        let greedy =
            plan_baseline_graph(GraphBaseline::Greedy, &mut inst.world, &mut inst.graph, &s, &g, &params).unwrap();
        assert_eq!(greedy.is_success(), opt.is_finite());
        assert_clean(&theory::lazy_soundness(&inst, &greedy));
        let id = plan_iterative_deepening(&mut inst.world, &mut inst.graph, &s, &g, &params).unwrap();
        assert_clean(&theory::lazy_soundness(&inst, &id));
        // First layer with a valid path is where ID stops.
        let first_feasible = layers.iter().copied().find(|&i| {
            oracle
                .dijkstra(&[i], &mut |a, b| truth.valid(a, b))
                .get(i, oracle.goal())
                .is_finite()
        });
        assert_eq!(id.stats.terminal_layer, first_feasible);
        match (id.cost(), sd0.cost()) {
            (Some(ci), Some(c0)) => {
                assert!(ci + TOL >= c0);
                assert_eq!(id.stats.deepest_layer_checked, first_feasible.unwrap());
            }
            (None, None) => {}
            other => panic!("{other:?}"),
        }
        // Each node pair is checked at most once across layers.
        assert_eq!(id.stats.edges_checked as usize, id.edges.len());
    }
}

#[test]
fn iterative_deepening_on_narrow_gap() {
    // Wall at x = 0.5 with a 3-cell gap: sparse layers cannot thread it.
    let rects = [CellRect::new(19, 0, 20, 18), CellRect::new(19, 22, 20, 39)];
    let mut world = world_from_rects(40, &rects, 0.0, 0.01);
    let s = Config::new(vec![0.2, 0.3]);
    let g = Config::new(vec![0.8, 0.2]);
    let mut graph = LayeredGraph::build(&HaltonSource::new(2, 17), 9, 30.0);
    let id = plan_iterative_deepening(&mut world, &mut graph, &s, &g, &SearchParams::with_wt(0.0)).unwrap();
    assert!(id.is_success());
    let layer = id.stats.terminal_layer.unwrap();
    assert!(layer > 1);
    assert_eq!(id.stats.deepest_layer_checked, layer);
    let oracle = OracleGraph::from_graph(&graph);
    let mut truth = TruthTable::new(&world, &oracle);
    for i in 1..layer {
        assert!(!oracle
            .dijkstra(&[i], &mut |a, b| truth.valid(a, b))
            .get(i, oracle.goal())
            .is_finite());
    }
}

#[test]
fn empty_world_bidirectional_is_balanced_within_one_iteration() {
    let mut world = world_from_rects(40, &[], 0.0, 0.01);
    let mut graph = LayeredGraph::build(&HaltonSource::new(2, 2), 10, 30.0);
    let r = plan_sd_bidirectional(
        &mut world,
        &mut graph,
        &Config::new(vec![0.05, 0.05]),
        &Config::new(vec![0.95, 0.95]),
        &SearchParams::with_wt(1.0),
    )
    .unwrap();
    assert!(r.is_success());
    assert!(r.stats.t_forward.abs_diff(r.stats.t_backward) <= r.stats.max_iteration);
    assert!(matches!(r.outcome, Outcome::Path { .. }));
}
