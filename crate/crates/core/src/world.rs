//! Collision world: a 2D occupancy grid, a robot model mapped from the unit
//! cube, configuration and edge validity, clearance and swept footprints.
//!
//! Cells outside the grid are treated as occupied, so the grid border acts
//! as a wall for every robot.

use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{distance, Config};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldError {
    #[error("configuration has {got} dimensions, the robot expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("configuration {0:?} lies outside the unit cube")]
    OutsideUnitCube(Vec<f64>),
    #[error("{0} is not supported for this robot model")]
    Unsupported(&'static str),
}

/// A grid cell. Coordinates may lie outside the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }
}

/// Geometry of the workspace discretization, independent of obstacles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridFrame {
    pub width: usize,
    pub height: usize,
    /// Meters per cell.
    pub resolution: f64,
}

impl GridFrame {
    pub fn new(width: usize, height: usize, resolution: f64) -> Self {
        assert!(width > 0 && height > 0, "grid must have at least one cell");
        assert!(resolution > 0.0, "resolution must be positive");
        Self {
            width,
            height,
            resolution,
        }
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.x >= 0 && cell.y >= 0 && (cell.x as usize) < self.width && (cell.y as usize) < self.height
    }

    /// Workspace extent in meters along x and y.
    pub fn extent(&self) -> (f64, f64) {
        (
            self.width as f64 * self.resolution,
            self.height as f64 * self.resolution,
        )
    }
}

/// Inclusive, cell-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl CellRect {
    pub fn new(x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        Self { x0, y0, x1, y1 }
    }
}

#[derive(Debug)]
pub struct OccupancyGrid {
    frame: GridFrame,
    occupied: Vec<bool>,
    edt: OnceLock<Vec<f64>>,
}

impl Clone for OccupancyGrid {
    fn clone(&self) -> Self {
        Self {
            frame: self.frame,
            occupied: self.occupied.clone(),
            edt: OnceLock::new(),
        }
    }
}

impl PartialEq for OccupancyGrid {
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame && self.occupied == other.occupied
    }
}

impl OccupancyGrid {
    pub fn empty(frame: GridFrame) -> Self {
        Self::from_cells(frame, vec![false; frame.width * frame.height])
    }

    pub fn full(frame: GridFrame) -> Self {
        Self::from_cells(frame, vec![true; frame.width * frame.height])
    }

    /// Row-major occupancy, `occupied[y * width + x]`.
    pub fn from_cells(frame: GridFrame, occupied: Vec<bool>) -> Self {
        assert_eq!(occupied.len(), frame.width * frame.height);
        Self {
            frame,
            occupied,
            edt: OnceLock::new(),
        }
    }

    /// Panics if a rectangle leaves the grid; callers validate first.
    pub fn from_rects(frame: GridFrame, rects: &[CellRect]) -> Self {
        let mut occupied = vec![false; frame.width * frame.height];
        for r in rects {
            assert!(
                r.x0 <= r.x1 && r.y0 <= r.y1 && r.x1 < frame.width && r.y1 < frame.height,
                "rectangle {r:?} outside grid"
            );
            for y in r.y0..=r.y1 {
                for x in r.x0..=r.x1 {
                    occupied[y * frame.width + x] = true;
                }
            }
        }
        Self::from_cells(frame, occupied)
    }

    pub fn frame(&self) -> GridFrame {
        self.frame
    }

    /// Out-of-grid cells count as occupied.
    pub fn is_occupied(&self, cell: Cell) -> bool {
        if !self.frame.contains(cell) {
            return true;
        }
        self.occupied[cell.y as usize * self.frame.width + cell.x as usize]
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    /// Euclidean distance (in cells) from each cell center to the nearest
    /// occupied cell center, row-major. Infinite when nothing is occupied.
    pub fn distance_transform(&self) -> &[f64] {
        self.edt.get_or_init(|| {
            let (w, h) = (self.frame.width, self.frame.height);
            let mut sq: Vec<f64> = self
                .occupied
                .iter()
                .map(|&o| if o { 0.0 } else { f64::INFINITY })
                .collect();
            let mut line = Vec::new();
            let mut out = Vec::new();
            for x in 0..w {
                line.clear();
                line.extend((0..h).map(|y| sq[y * w + x]));
                edt_1d(&line, &mut out);
                for y in 0..h {
                    sq[y * w + x] = out[y];
                }
            }
            for y in 0..h {
                line.clear();
                line.extend_from_slice(&sq[y * w..(y + 1) * w]);
                edt_1d(&line, &mut out);
                sq[y * w..(y + 1) * w].copy_from_slice(&out);
            }
            sq.into_iter().map(f64::sqrt).collect()
        })
    }
}

/// One-dimensional squared distance transform (lower envelope of parabolas
/// rooted at the finite entries of `f`).
fn edt_1d(f: &[f64], d: &mut Vec<f64>) {
    let n = f.len();
    d.clear();
    d.resize(n, f64::INFINITY);
    let sites: Vec<usize> = (0..n).filter(|&q| f[q].is_finite()).collect();
    let Some(&first) = sites.first() else {
        return;
    };
    let mut v = vec![first; sites.len()];
    let mut z = vec![f64::INFINITY; sites.len() + 1];
    z[0] = f64::NEG_INFINITY;
    let mut k = 0usize;
    for &q in &sites[1..] {
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q - p) as f64);
            if s <= z[k] {
                k -= 1;
                continue;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    k = 0;
    for (q, dq) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let diff = q as f64 - p as f64;
        *dq = diff * diff + f[p];
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RobotModel {
    /// A disk robot; the two coordinates map to the full workspace extent.
    Point { radius: f64 },
    /// A serial planar arm. Coordinate `k` maps affinely to joint angle
    /// `-pi + 2 pi q_k`, measured relative to the previous link.
    Arm { link_lengths: Vec<f64>, base: [f64; 2] },
}

impl RobotModel {
    pub fn cspace_dims(&self) -> usize {
        match self {
            RobotModel::Point { .. } => 2,
            RobotModel::Arm { link_lengths, .. } => link_lengths.len(),
        }
    }

    /// Workspace position of a point robot, in cell units.
    fn point_position(frame: &GridFrame, q: &[f64]) -> (f64, f64) {
        (q[0] * frame.width as f64, q[1] * frame.height as f64)
    }

    /// Joint positions of the arm in meters, base first.
    pub fn arm_joints(link_lengths: &[f64], base: [f64; 2], q: &[f64]) -> Vec<[f64; 2]> {
        let mut pts = Vec::with_capacity(link_lengths.len() + 1);
        let mut p = base;
        let mut heading = 0.0;
        pts.push(p);
        for (len, &qk) in link_lengths.iter().zip(q) {
            heading += joint_angle(qk);
            p = [p[0] + len * heading.cos(), p[1] + len * heading.sin()];
            pts.push(p);
        }
        pts
    }

    /// Workspace point traced for visualization: the point robot center or
    /// the arm end effector, in meters.
    pub fn tip(&self, frame: &GridFrame, q: &[f64]) -> [f64; 2] {
        match self {
            RobotModel::Point { .. } => {
                let (x, y) = Self::point_position(frame, q);
                [x * frame.resolution, y * frame.resolution]
            }
            RobotModel::Arm { link_lengths, base } => *Self::arm_joints(link_lengths, *base, q).last().unwrap(),
        }
    }

    /// Appends the cells occupied at `q` to `out` (sorted, deduplicated).
    pub fn footprint_into(&self, frame: &GridFrame, q: &[f64], out: &mut Vec<Cell>) {
        out.clear();
        match self {
            RobotModel::Point { radius } => {
                let (px, py) = Self::point_position(frame, q);
                let r = radius / frame.resolution;
                if r <= 0.0 {
                    out.push(Cell::new(px.floor() as i32, py.floor() as i32));
                    return;
                }
                let (x0, x1) = ((px - r).floor() as i32, (px + r).floor() as i32);
                let (y0, y1) = ((py - r).floor() as i32, (py + r).floor() as i32);
                for y in y0..=y1 {
                    for x in x0..=x1 {
                        let dx = (x as f64 - px).max(px - (x + 1) as f64).max(0.0);
                        let dy = (y as f64 - py).max(py - (y + 1) as f64).max(0.0);
                        if dx * dx + dy * dy < r * r {
                            out.push(Cell::new(x, y));
                        }
                    }
                }
            }
            RobotModel::Arm { link_lengths, base } => {
                let joints = Self::arm_joints(link_lengths, *base, q);
                let mut line = Vec::new();
                for seg in joints.windows(2) {
                    let a = (seg[0][0] / frame.resolution, seg[0][1] / frame.resolution);
                    let b = (seg[1][0] / frame.resolution, seg[1][1] / frame.resolution);
                    supercover(a, b, &mut line);
                    for c in &line {
                        for dy in -1..=1 {
                            for dx in -1..=1 {
                                out.push(Cell::new(c.x + dx, c.y + dy));
                            }
                        }
                    }
                }
                out.sort_unstable();
                out.dedup();
            }
        }
    }

    pub fn footprint(&self, frame: &GridFrame, q: &[f64]) -> Vec<Cell> {
        let mut out = Vec::new();
        self.footprint_into(frame, q, &mut out);
        out
    }
}

/// Maps a unit-cube coordinate to a joint angle in `[-pi, pi)`.
pub fn joint_angle(q: f64) -> f64 {
    -std::f64::consts::PI + 2.0 * std::f64::consts::PI * q
}

/// All cells crossed by the segment `a -> b` (cell units), by grid traversal.
/// Both cells are emitted when the segment passes exactly through a corner.
fn supercover(a: (f64, f64), b: (f64, f64), out: &mut Vec<Cell>) {
    out.clear();
    let mut cx = a.0.floor() as i32;
    let mut cy = a.1.floor() as i32;
    let ex = b.0.floor() as i32;
    let ey = b.1.floor() as i32;
    out.push(Cell::new(cx, cy));
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let step_x = if dx > 0.0 { 1 } else { -1 };
    let step_y = if dy > 0.0 { 1 } else { -1 };
    let t_delta_x = if dx != 0.0 { (1.0 / dx).abs() } else { f64::INFINITY };
    let t_delta_y = if dy != 0.0 { (1.0 / dy).abs() } else { f64::INFINITY };
    let mut t_max_x = if dx > 0.0 {
        ((cx + 1) as f64 - a.0) / dx
    } else if dx < 0.0 {
        (cx as f64 - a.0) / dx
    } else {
        f64::INFINITY
    };
    let mut t_max_y = if dy > 0.0 {
        ((cy + 1) as f64 - a.1) / dy
    } else if dy < 0.0 {
        (cy as f64 - a.1) / dy
    } else {
        f64::INFINITY
    };
    let max_steps = (ex - cx).unsigned_abs() + (ey - cy).unsigned_abs() + 2;
    for _ in 0..max_steps * 2 {
        if cx == ex && cy == ey {
            break;
        }
        if (t_max_x - t_max_y).abs() < 1e-12 {
            if t_max_x > 1.0 {
                break;
            }
            out.push(Cell::new(cx + step_x, cy));
            out.push(Cell::new(cx, cy + step_y));
            cx += step_x;
            cy += step_y;
            t_max_x += t_delta_x;
            t_max_y += t_delta_y;
        } else if t_max_x < t_max_y {
            if t_max_x > 1.0 {
                break;
            }
            cx += step_x;
            t_max_x += t_delta_x;
        } else {
            if t_max_y > 1.0 {
                break;
            }
            cy += step_y;
            t_max_y += t_delta_y;
        }
        out.push(Cell::new(cx, cy));
    }
}

/// Order in which the discretized configurations of an edge are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckOrder {
    InOrder,
    Randomized(u64),
}

/// Evenly spaced configurations from `q1` to `q2` inclusive, with
/// `ceil(|q1 - q2| / step) + 1` entries. The samples are always computed from
/// the lexicographically smaller endpoint, so `discretize(q2, q1)` is the
/// exact reverse of `discretize(q1, q2)`.
pub fn discretize(q1: &Config, q2: &Config, step: f64) -> Vec<Config> {
    assert!(step > 0.0, "discretization step must be positive");
    let flipped = lex_greater(q1, q2);
    let (a, b) = if flipped { (q2, q1) } else { (q1, q2) };
    let n = sample_count(a, b, step);
    let mut out: Vec<Config> = (0..n).map(|k| sample(a, b, k, n)).collect();
    if flipped {
        out.reverse();
    }
    out
}

fn lex_greater(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x > y;
        }
    }
    false
}

fn sample_count(a: &[f64], b: &[f64], step: f64) -> usize {
    let d = distance(a, b);
    if d == 0.0 {
        1
    } else {
        (d / step).ceil() as usize + 1
    }
}

fn sample(a: &Config, b: &Config, k: usize, n: usize) -> Config {
    if k == 0 {
        a.clone()
    } else if k + 1 == n {
        b.clone()
    } else {
        a.lerp(b, k as f64 / (n - 1) as f64)
    }
}

/// Default maximum C-space spacing between checked configurations.
pub const DEFAULT_CHECK_STEP: f64 = 0.02;

/// Grid and robot shared read-only, plus per-query counters and an optional
/// swept-footprint cache.
#[derive(Debug, Clone)]
pub struct CollisionWorld {
    grid: Arc<OccupancyGrid>,
    robot: Arc<RobotModel>,
    check_step: f64,
    config_checks: u64,
    edge_checks: u64,
    swept: Option<SweptCache>,
    scratch: Vec<Cell>,
}

impl CollisionWorld {
    pub fn new(grid: Arc<OccupancyGrid>, robot: Arc<RobotModel>, check_step: f64) -> Self {
        assert!(check_step > 0.0, "check_step must be positive");
        Self {
            grid,
            robot,
            check_step,
            config_checks: 0,
            edge_checks: 0,
            swept: None,
            scratch: Vec::new(),
        }
    }

    /// A fresh world over the same grid and robot with zeroed counters and no cache.
    pub fn fork(&self) -> Self {
        Self::new(self.grid.clone(), self.robot.clone(), self.check_step)
    }

    pub fn grid(&self) -> &OccupancyGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<OccupancyGrid> {
        &self.grid
    }

    pub fn robot(&self) -> &RobotModel {
        &self.robot
    }

    pub fn robot_arc(&self) -> &Arc<RobotModel> {
        &self.robot
    }

    pub fn frame(&self) -> GridFrame {
        self.grid.frame()
    }

    pub fn check_step(&self) -> f64 {
        self.check_step
    }

    pub fn dims(&self) -> usize {
        self.robot.cspace_dims()
    }

    pub fn config_check_count(&self) -> u64 {
        self.config_checks
    }

    pub fn edge_check_count(&self) -> u64 {
        self.edge_checks
    }

    pub fn reset_counters(&mut self) {
        self.config_checks = 0;
        self.edge_checks = 0;
    }

    /// Replaces the obstacle grid. The frame must match for cached footprints
    /// to stay meaningful.
    pub fn set_grid(&mut self, grid: Arc<OccupancyGrid>) {
        self.grid = grid;
    }

    /// Routes [`CollisionWorld::check_edge`] through a swept-footprint cache.
    pub fn attach_swept_cache(&mut self, cache: SweptCache) {
        assert_eq!(cache.frame, self.frame(), "swept cache built for another grid frame");
        assert_eq!(&cache.robot, self.robot.as_ref(), "swept cache built for another robot");
        self.swept = Some(cache);
    }

    pub fn detach_swept_cache(&mut self) -> Option<SweptCache> {
        self.swept.take()
    }

    pub fn swept_cache(&self) -> Option<&SweptCache> {
        self.swept.as_ref()
    }

    fn validate(&self, q: &[f64]) -> Result<(), WorldError> {
        let expected = self.dims();
        if q.len() != expected {
            return Err(WorldError::DimensionMismatch { expected, got: q.len() });
        }
        if !q.iter().all(|v| (0.0..1.0).contains(v)) {
            return Err(WorldError::OutsideUnitCube(q.to_vec()));
        }
        Ok(())
    }

    fn config_free(&mut self, q: &[f64]) -> bool {
        self.config_checks += 1;
        let frame = self.grid.frame();
        let mut cells = std::mem::take(&mut self.scratch);
        self.robot.footprint_into(&frame, q, &mut cells);
        let free = !cells.iter().any(|&c| self.grid.is_occupied(c));
        self.scratch = cells;
        free
    }

    pub fn is_config_valid(&mut self, q: &Config) -> Result<bool, WorldError> {
        self.validate(q)?;
        Ok(self.config_free(q))
    }

    /// True iff every discretized configuration of the edge is free. Stops at
    /// the first colliding configuration.
    pub fn is_edge_valid(&mut self, q1: &Config, q2: &Config, order: CheckOrder) -> Result<bool, WorldError> {
        self.validate(q1)?;
        self.validate(q2)?;
        self.edge_checks += 1;
        let flipped = lex_greater(q1, q2);
        let (a, b) = if flipped { (q2, q1) } else { (q1, q2) };
        let n = sample_count(a, b, self.check_step);
        let free = match order {
            CheckOrder::InOrder => {
                // Walk from q1 towards q2.
                (0..n).all(|i| {
                    let k = if flipped { n - 1 - i } else { i };
                    let q = sample(a, b, k, n);
                    self.config_free(&q)
                })
            }
            CheckOrder::Randomized(seed) => {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                idx.into_iter().all(|k| {
                    let q = sample(a, b, k, n);
                    self.config_free(&q)
                })
            }
        };
        Ok(free)
    }

    /// Edge validity through the swept-footprint cache. A hit intersects the
    /// cached cells with the grid and checks no configurations; a miss falls
    /// through to [`CollisionWorld::is_edge_valid`] and records the footprint.
    pub fn is_edge_valid_cached(
        &mut self,
        cache: &mut SweptCache,
        q1: &Config,
        q2: &Config,
    ) -> Result<bool, WorldError> {
        self.validate(q1)?;
        self.validate(q2)?;
        debug_assert_eq!(cache.frame, self.frame());
        if let Some(cells) = cache.get(q1, q2) {
            self.edge_checks += 1;
            return Ok(!cells.iter().any(|&c| self.grid.is_occupied(c)));
        }
        let valid = self.is_edge_valid(q1, q2, CheckOrder::InOrder)?;
        cache.insert(q1, q2);
        Ok(valid)
    }

    /// Edge validity as used by the planners: through the attached swept
    /// cache when there is one, else a direct check in the given order.
    pub fn check_edge(&mut self, q1: &Config, q2: &Config, order: CheckOrder) -> Result<bool, WorldError> {
        match self.swept.take() {
            Some(mut cache) => {
                let r = self.is_edge_valid_cached(&mut cache, q1, q2);
                self.swept = Some(cache);
                r
            }
            None => self.is_edge_valid(q1, q2, order),
        }
    }

    /// C-space distance from `q` to the nearest colliding configuration
    /// (point robot only). Exact point-to-cell distance in the workspace,
    /// minus the robot radius, scaled by the larger workspace extent.
    pub fn clearance(&self, q: &Config) -> Result<f64, WorldError> {
        self.validate(q)?;
        let radius = match self.robot.as_ref() {
            RobotModel::Point { radius } => *radius,
            RobotModel::Arm { .. } => return Err(WorldError::Unsupported("clearance")),
        };
        let frame = self.grid.frame();
        let (px, py) = RobotModel::point_position(&frame, q);
        let (w, h) = (frame.width as f64, frame.height as f64);
        let mut best = px.min(w - px).min(py).min(h - py);
        let cx = (px.floor() as usize).min(frame.width - 1);
        let cy = (py.floor() as usize).min(frame.height - 1);
        let edt = self.grid.distance_transform()[cy * frame.width + cx];
        if edt.is_finite() {
            // Any occupied cell whose center is farther than edt + 2 sqrt(2)
            // from the containing cell cannot beat the nearest one.
            let window = (edt + 2.0 * std::f64::consts::SQRT_2).min(best + 2.0).ceil() as i64 + 1;
            let (cx, cy) = (cx as i64, cy as i64);
            for y in (cy - window).max(0)..=(cy + window).min(frame.height as i64 - 1) {
                for x in (cx - window).max(0)..=(cx + window).min(frame.width as i64 - 1) {
                    if !self.grid.is_occupied(Cell::new(x as i32, y as i32)) {
                        continue;
                    }
                    let dx = (x as f64 - px).max(px - (x + 1) as f64).max(0.0);
                    let dy = (y as f64 - py).max(py - (y + 1) as f64).max(0.0);
                    best = best.min((dx * dx + dy * dy).sqrt());
                }
            }
        }
        let (ex, ey) = frame.extent();
        Ok(((best * frame.resolution - radius) / ex.max(ey)).max(0.0))
    }

    /// Minimum clearance over the discretized path.
    pub fn path_clearance(&self, path: &[Config]) -> Result<f64, WorldError> {
        let mut best = f64::INFINITY;
        if path.len() == 1 {
            return self.clearance(&path[0]);
        }
        for w in path.windows(2) {
            for q in discretize(&w[0], &w[1], self.check_step) {
                best = best.min(self.clearance(&q)?);
            }
        }
        Ok(best)
    }
}

/// Canonical key of an unordered configuration pair: the bit patterns of the
/// lexicographically smaller endpoint followed by the larger one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairKey(Box<[u64]>);

impl PairKey {
    pub fn new(q1: &[f64], q2: &[f64]) -> Self {
        let (a, b) = if lex_greater(q1, q2) { (q2, q1) } else { (q1, q2) };
        PairKey(a.iter().chain(b).map(|v| v.to_bits()).collect())
    }
}

/// Environment-independent swept footprints of edges: for each cached edge,
/// the union of the robot footprint over its discretized configurations.
#[derive(Debug, Clone)]
pub struct SweptCache {
    frame: GridFrame,
    robot: RobotModel,
    step: f64,
    map: FxHashMap<PairKey, Vec<Cell>>,
}

impl SweptCache {
    pub fn new(robot: RobotModel, frame: GridFrame, step: f64) -> Self {
        assert!(step > 0.0);
        Self {
            frame,
            robot,
            step,
            map: FxHashMap::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn contains(&self, q1: &[f64], q2: &[f64]) -> bool {
        self.map.contains_key(&PairKey::new(q1, q2))
    }

    pub fn get(&self, q1: &[f64], q2: &[f64]) -> Option<&[Cell]> {
        self.map.get(&PairKey::new(q1, q2)).map(Vec::as_slice)
    }

    /// Computes and stores the swept footprint of an edge.
    pub fn insert(&mut self, q1: &Config, q2: &Config) -> &[Cell] {
        let key = PairKey::new(q1, q2);
        let (frame, robot, step) = (self.frame, &self.robot, self.step);
        self.map.entry(key).or_insert_with(|| {
            let mut all = Vec::new();
            let mut buf = Vec::new();
            for q in discretize(q1, q2, step) {
                robot.footprint_into(&frame, &q, &mut buf);
                all.extend_from_slice(&buf);
            }
            all.sort_unstable();
            all.dedup();
            all
        })
    }
}
