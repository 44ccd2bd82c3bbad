//! Scenario files: a grid with rectangular obstacles, a robot and one query.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sdplan_core::graph::DEFAULT_TARGET_DEGREE;
use sdplan_core::world::{CellRect, DEFAULT_CHECK_STEP};
use sdplan_core::{CollisionWorld, Config, GridFrame, HaltonSource, LayeredGraph, OccupancyGrid, RobotModel};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_DEPTH: usize = 12;
pub const DEFAULT_TRIALS: usize = 20;
pub const DEFAULT_TIME_LIMIT_MS: u64 = 10_000;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        field: field.into(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    pub resolution: f64,
    #[serde(default)]
    pub obstacles: Vec<CellRect>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default = "default_target_degree")]
    pub target_degree: f64,
    #[serde(default)]
    pub seed_base: u64,
}

fn default_target_degree() -> f64 {
    DEFAULT_TARGET_DEGREE
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

fn default_time_limit_ms() -> u64 {
    DEFAULT_TIME_LIMIT_MS
}

fn default_check_step() -> f64 {
    DEFAULT_CHECK_STEP
}

/// The on-disk form of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    pub dims: usize,
    pub robot: RobotModel,
    pub grid: GridSpec,
    pub start: Vec<f64>,
    pub goal: Vec<f64>,
    #[serde(default)]
    pub graph: GraphSpec,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_time_limit_ms")]
    pub time_limit_ms: u64,
    #[serde(default = "default_check_step")]
    pub check_step: f64,
}

/// A validated scenario with its grid and robot ready to share.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    pub depth: usize,
    pub start: Config,
    pub goal: Config,
    grid: Arc<OccupancyGrid>,
    robot: Arc<RobotModel>,
}

impl Scenario {
    pub fn from_spec(mut spec: ScenarioSpec) -> Result<Self, ScenarioError> {
        let depth = match spec.graph.depth {
            Some(0) => return Err(invalid("graph.D", "must be at least 1")),
            Some(d) if d > 24 => {
                return Err(invalid(
                    "graph.D",
                    format!("{d} layers would need 2^{d} configurations"),
                ))
            }
            Some(d) => d,
            None => {
                log::warn!("scenario {}: graph.D missing, using {DEFAULT_DEPTH}", spec.name);
                spec.graph.depth = Some(DEFAULT_DEPTH);
                DEFAULT_DEPTH
            }
        };
        if !(spec.graph.target_degree.is_finite() && spec.graph.target_degree > 0.0) {
            return Err(invalid("graph.target_degree", "must be positive"));
        }
        if spec.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if !(spec.check_step.is_finite() && spec.check_step > 0.0) {
            return Err(invalid("check_step", "must be positive"));
        }
        let g = &spec.grid;
        if g.width == 0 || g.height == 0 {
            return Err(invalid("grid", "width and height must be positive"));
        }
        if !(g.resolution.is_finite() && g.resolution > 0.0) {
            return Err(invalid("grid.resolution", "must be positive"));
        }
        for (i, r) in g.obstacles.iter().enumerate() {
            if r.x0 > r.x1 || r.y0 > r.y1 {
                return Err(invalid(
                    format!("grid.obstacles[{i}]"),
                    "corners are not ordered (x0 <= x1, y0 <= y1)",
                ));
            }
            if r.x1 >= g.width || r.y1 >= g.height {
                return Err(invalid(
                    format!("grid.obstacles[{i}]"),
                    format!("extends outside the {}x{} grid", g.width, g.height),
                ));
            }
        }
        match &spec.robot {
            RobotModel::Point { radius } if !(radius.is_finite() && *radius >= 0.0) => {
                return Err(invalid("robot.radius", "must be non-negative"));
            }
            RobotModel::Arm { link_lengths, .. } if link_lengths.is_empty() => {
                return Err(invalid("robot.link_lengths", "needs at least one link"));
            }
            _ => {}
        }
        if spec.robot.cspace_dims() != spec.dims {
            return Err(invalid(
                "dims",
                format!(
                    "{} but the robot has {} degrees of freedom",
                    spec.dims,
                    spec.robot.cspace_dims()
                ),
            ));
        }
        let frame = GridFrame::new(g.width, g.height, g.resolution);
        let grid = Arc::new(OccupancyGrid::from_rects(frame, &g.obstacles));
        let robot = Arc::new(spec.robot.clone());
        let mut world = CollisionWorld::new(grid.clone(), robot.clone(), spec.check_step);
        let start = check_endpoint(&mut world, "start", &spec.start, spec.dims)?;
        let goal = check_endpoint(&mut world, "goal", &spec.goal, spec.dims)?;
        Ok(Self {
            spec,
            depth,
            start,
            goal,
            grid,
            robot,
        })
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn dims(&self) -> usize {
        self.spec.dims
    }

    pub fn grid(&self) -> &Arc<OccupancyGrid> {
        &self.grid
    }

    /// A fresh world with zeroed counters over the shared grid.
    pub fn world(&self) -> CollisionWorld {
        CollisionWorld::new(self.grid.clone(), self.robot.clone(), self.spec.check_step)
    }

    /// Graph for one trial, built from the Halton sequence seeded by `seed`.
    pub fn build_graph(&self, seed: u64) -> LayeredGraph {
        let source = HaltonSource::new(self.dims(), seed);
        LayeredGraph::build(&source, self.depth, self.spec.graph.target_degree)
    }

    /// Seed of trial `k`, honoring `SD_SEED_BASE` when set.
    pub fn trial_seeds(&self) -> Result<Vec<u64>, ScenarioError> {
        let base = match std::env::var("SD_SEED_BASE") {
            Ok(v) => v
                .trim()
                .parse::<u64>()
                .map_err(|e| invalid("SD_SEED_BASE", format!("{v:?}: {e}")))?,
            Err(_) => self.spec.graph.seed_base,
        };
        Ok((0..self.spec.trials as u64).map(|k| base + k).collect())
    }
}

fn check_endpoint(world: &mut CollisionWorld, field: &str, q: &[f64], dims: usize) -> Result<Config, ScenarioError> {
    if q.len() != dims {
        return Err(invalid(field, format!("has {} coordinates, expected {dims}", q.len())));
    }
    let q = Config::new(q.to_vec());
    if !q.in_unit_cube() {
        return Err(invalid(field, "coordinates must lie in [0, 1)"));
    }
    match world.is_config_valid(&q) {
        Ok(true) => Ok(q),
        Ok(false) => Err(invalid(field, "collides with an obstacle")),
        Err(e) => Err(invalid(field, e.to_string())),
    }
}

pub fn parse_scenario(text: &str, origin: &Path) -> Result<Scenario, ScenarioError> {
    let spec: ScenarioSpec = serde_json::from_str(text).map_err(|source| ScenarioError::Parse {
        path: origin.to_path_buf(),
        source,
    })?;
    Scenario::from_spec(spec)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text, path)
}

/// Directory holding the scenarios shipped with the crate.
pub fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

/// Loads a shipped scenario by name, e.g. `"gap2d"`.
pub fn bundled(name: &str) -> Result<Scenario, ScenarioError> {
    load_scenario(&bundled_dir().join(format!("{name}.json")))
}
