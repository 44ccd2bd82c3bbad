//! Layered multi-density roadmaps for motion planning, searched by A* with a
//! planning-time heuristic under lazy edge evaluation, plus the graph and
//! sampling baselines used to compare against it.

pub mod baselines;
pub mod config;
pub mod graph;
pub mod halton;
pub mod search;
pub mod smooth;
pub mod world;

pub use baselines::{plan_baseline_graph, plan_iterative_deepening, plan_rrt_connect, GraphBaseline, RrtParams};
pub use config::{path_cost, Config};
pub use graph::{Edge, EdgeKind, EdgeState, EdgeStateStore, GraphError, LayeredGraph, NodeId, VertexId, GOAL, START};
pub use halton::HaltonSource;
pub use search::{
    check_edges, plan_sd, plan_sd_alternating, plan_sd_anytime, plan_sd_bidirectional, Balance, Heuristic, Outcome,
    PlanError, PlanResult, SearchParams, SearchStats,
};
pub use smooth::{shortcut, SmoothParams};
pub use world::{CheckOrder, CollisionWorld, GridFrame, OccupancyGrid, RobotModel, SweptCache, WorldError};
