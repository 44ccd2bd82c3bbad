//! The layered roadmap: r-disk layers over growing prefixes of one Halton
//! sequence, joined by zero-cost vertical edges between copies of the same
//! configuration, plus the query slot for start and goal.

use std::io::{self, Read, Write};
use std::sync::Arc;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::config::{distance, Config};
use crate::halton::HaltonSource;
use crate::world::SweptCache;

/// Index into the configuration table, or one of the query sentinels.
pub type NodeId = u32;

pub const START: NodeId = u32::MAX - 1;
pub const GOAL: NodeId = u32::MAX;

pub fn is_sentinel(node: NodeId) -> bool {
    node >= START
}

/// Expected number of within-layer neighbors the default build aims for.
pub const DEFAULT_TARGET_DEGREE: f64 = 30.0;

/// Layers with at most this many nodes get their adjacency precomputed.
pub const DEFAULT_ADJACENCY_THRESHOLD: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("start and goal are the same configuration")]
    DegenerateQuery,
    #[error("query configuration has {got} dimensions, the graph has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("query configuration {0:?} lies outside the unit cube")]
    OutsideUnitCube(Vec<f64>),
    #[error("graph dump: {0}")]
    Dump(String),
}

/// A vertex `v^layer_node`. Layers are numbered from 1 (sparsest).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub layer: usize,
    pub node: NodeId,
}

impl VertexId {
    pub fn new(layer: usize, node: NodeId) -> Self {
        Self { layer, node }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    WithinLayer,
    InterLayer,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub kind: EdgeKind,
    pub cost: f64,
}

/// Volume of the unit ball in `dims` dimensions.
pub fn unit_ball_volume(dims: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_d = V_{d-2} * 2 pi / d.
    let mut v = [1.0, 2.0];
    for d in 2..=dims {
        v[d % 2] *= 2.0 * std::f64::consts::PI / d as f64;
    }
    v[dims % 2]
}

/// Radius at which an r-disk graph of `n` uniform points in the unit cube
/// has `target_degree` expected neighbors per node, ignoring boundary effects.
pub fn connection_radius(n: usize, dims: usize, target_degree: f64) -> f64 {
    assert!(n >= 1 && dims >= 1 && target_degree > 0.0);
    (target_degree / (n as f64 * unit_ball_volume(dims))).powf(1.0 / dims as f64)
}

/// Uniform bucket grid over the unit cube for radius queries.
#[derive(Debug, Clone)]
struct BucketIndex {
    per_axis: usize,
    start: Vec<u32>,
    nodes: Vec<NodeId>,
}

impl BucketIndex {
    fn build(configs: &[f64], dims: usize, count: usize, radius: f64) -> Self {
        // Bucket side >= radius; cap the bucket count near the node count.
        let mut per_axis = ((1.0 / radius).floor() as usize).max(1);
        let cap = (count * 2).max(1);
        while per_axis > 1 && (per_axis as f64).powi(dims as i32) > cap as f64 {
            per_axis -= 1;
        }
        let total = per_axis.pow(dims as u32);
        let mut counts = vec![0u32; total + 1];
        let keys: Vec<usize> = (0..count)
            .map(|j| Self::key_of(&configs[j * dims..(j + 1) * dims], per_axis))
            .collect();
        for &k in &keys {
            counts[k + 1] += 1;
        }
        for b in 0..total {
            counts[b + 1] += counts[b];
        }
        let mut fill = counts.clone();
        let mut nodes = vec![0; count];
        for (j, &k) in keys.iter().enumerate() {
            nodes[fill[k] as usize] = j as NodeId;
            fill[k] += 1;
        }
        Self {
            per_axis,
            start: counts,
            nodes,
        }
    }

    fn coord(x: f64, per_axis: usize) -> usize {
        ((x * per_axis as f64).floor().max(0.0) as usize).min(per_axis - 1)
    }

    fn key_of(q: &[f64], per_axis: usize) -> usize {
        q.iter().fold(0, |acc, &x| acc * per_axis + Self::coord(x, per_axis))
    }

    /// Calls `f` with every node in the buckets adjacent to `q`'s bucket.
    fn for_each_candidate(&self, q: &[f64], mut f: impl FnMut(NodeId)) {
        let dims = q.len();
        let m = self.per_axis as isize;
        let center: Vec<isize> = q.iter().map(|&x| Self::coord(x, self.per_axis) as isize).collect();
        let mut offset = vec![-1isize; dims];
        loop {
            let mut key = 0usize;
            let mut inside = true;
            for d in 0..dims {
                let c = center[d] + offset[d];
                if c < 0 || c >= m {
                    inside = false;
                    break;
                }
                key = key * self.per_axis + c as usize;
            }
            if inside {
                let (a, b) = (self.start[key] as usize, self.start[key + 1] as usize);
                for &n in &self.nodes[a..b] {
                    f(n);
                }
            }
            // Odometer over {-1, 0, 1}^dims.
            let mut d = 0;
            loop {
                if d == dims {
                    return;
                }
                offset[d] += 1;
                if offset[d] <= 1 {
                    break;
                }
                offset[d] = -1;
                d += 1;
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Layer {
    count: usize,
    radius: f64,
    index: BucketIndex,
    /// CSR adjacency, ascending neighbor ids.
    adjacency: Option<(Vec<u32>, Vec<NodeId>)>,
}

/// The immutable part of the layered graph.
#[derive(Debug)]
pub struct Roadmap {
    dims: usize,
    counts: Vec<usize>,
    radii: Vec<f64>,
    configs: Vec<f64>,
    seed: u64,
    target_degree: f64,
    layers: Vec<Layer>,
    offsets: Vec<usize>,
}

impl Roadmap {
    fn build(source: &HaltonSource, counts: Vec<usize>, target_degree: f64, adjacency_threshold: usize) -> Self {
        assert!(!counts.is_empty(), "at least one layer is required");
        assert!(
            counts.windows(2).all(|w| w[0] < w[1]) && counts[0] >= 1,
            "layer node counts must be positive and strictly increasing"
        );
        assert!(target_degree > 0.0);
        let dims = source.dims();
        let total = *counts.last().unwrap();
        let mut configs = Vec::with_capacity(total * dims);
        for q in source.take(total) {
            configs.extend_from_slice(&q);
        }
        let radii: Vec<f64> = counts
            .iter()
            .map(|&n| connection_radius(n, dims, target_degree))
            .collect();
        let layers = counts
            .iter()
            .zip(&radii)
            .map(|(&count, &radius)| {
                let index = BucketIndex::build(&configs, dims, count, radius);
                let mut layer = Layer {
                    count,
                    radius,
                    index,
                    adjacency: None,
                };
                if count <= adjacency_threshold {
                    layer.adjacency = Some(Self::adjacency(&configs, dims, &layer));
                }
                layer
            })
            .collect();
        let mut offsets = Vec::with_capacity(counts.len() + 1);
        let mut acc = 0;
        for &n in &counts {
            offsets.push(acc);
            acc += n;
        }
        offsets.push(acc);
        Self {
            dims,
            counts,
            radii,
            configs,
            seed: source.seed(),
            target_degree,
            layers,
            offsets,
        }
    }

    fn adjacency(configs: &[f64], dims: usize, layer: &Layer) -> (Vec<u32>, Vec<NodeId>) {
        let mut start = Vec::with_capacity(layer.count + 1);
        let mut nbrs = Vec::new();
        let mut buf = Vec::new();
        start.push(0);
        for j in 0..layer.count {
            Self::radius_query(
                configs,
                dims,
                layer,
                &configs[j * dims..(j + 1) * dims],
                Some(j as NodeId),
                &mut buf,
            );
            nbrs.extend_from_slice(&buf);
            start.push(nbrs.len() as u32);
        }
        (start, nbrs)
    }

    /// Nodes of the layer strictly within the layer radius of `q`, ascending.
    fn radius_query(
        configs: &[f64],
        dims: usize,
        layer: &Layer,
        q: &[f64],
        exclude: Option<NodeId>,
        out: &mut Vec<NodeId>,
    ) {
        out.clear();
        layer.index.for_each_candidate(q, |n| {
            if Some(n) != exclude {
                let c = &configs[n as usize * dims..(n as usize + 1) * dims];
                if distance(c, q) < layer.radius {
                    out.push(n);
                }
            }
        });
        out.sort_unstable();
    }

    fn node_config(&self, node: NodeId) -> &[f64] {
        let j = node as usize;
        &self.configs[j * self.dims..(j + 1) * self.dims]
    }
}

/// Per-query start and goal insertion.
#[derive(Debug, Clone)]
struct QuerySlot {
    start: Config,
    goal: Config,
    /// Per layer, ascending within-layer neighbors (the other sentinel last).
    start_nbrs: Vec<Vec<NodeId>>,
    goal_nbrs: Vec<Vec<NodeId>>,
}

/// A layered roadmap plus an optional query. Cloning shares the roadmap and
/// copies only the query slot.
#[derive(Debug, Clone)]
pub struct LayeredGraph {
    roadmap: Arc<Roadmap>,
    query: Option<QuerySlot>,
}

impl LayeredGraph {
    /// Builds `depth` layers with `n_i = 2^i` nodes each.
    pub fn build(source: &HaltonSource, depth: usize, target_degree: f64) -> Self {
        assert!((1..32).contains(&depth), "depth must be in 1..32");
        let counts = (1..=depth).map(|i| 1usize << i).collect();
        Self::build_with_counts(source, counts, target_degree, DEFAULT_ADJACENCY_THRESHOLD)
    }

    pub fn build_with_counts(
        source: &HaltonSource,
        counts: Vec<usize>,
        target_degree: f64,
        adjacency_threshold: usize,
    ) -> Self {
        Self {
            roadmap: Arc::new(Roadmap::build(source, counts, target_degree, adjacency_threshold)),
            query: None,
        }
    }

    pub fn dims(&self) -> usize {
        self.roadmap.dims
    }

    /// Number of layers `D`.
    pub fn depth(&self) -> usize {
        self.roadmap.counts.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.roadmap.counts
    }

    /// Node count of a layer (1-based).
    pub fn count(&self, layer: usize) -> usize {
        self.roadmap.counts[layer - 1]
    }

    pub fn radii(&self) -> &[f64] {
        &self.roadmap.radii
    }

    pub fn radius(&self, layer: usize) -> f64 {
        self.roadmap.radii[layer - 1]
    }

    pub fn seed(&self) -> u64 {
        self.roadmap.seed
    }

    pub fn target_degree(&self) -> f64 {
        self.roadmap.target_degree
    }

    pub fn shares_roadmap(&self, other: &LayeredGraph) -> bool {
        Arc::ptr_eq(&self.roadmap, &other.roadmap)
    }

    /// Configuration of a node; sentinels resolve through the query slot.
    pub fn config(&self, node: NodeId) -> Option<&[f64]> {
        match node {
            START => self.query.as_ref().map(|q| q.start.as_slice()),
            GOAL => self.query.as_ref().map(|q| q.goal.as_slice()),
            j if (j as usize) < *self.roadmap.counts.last().unwrap() => Some(self.roadmap.node_config(j)),
            _ => None,
        }
    }

    /// Like [`LayeredGraph::config`], panicking for unknown nodes.
    pub fn config_of(&self, node: NodeId) -> &[f64] {
        self.config(node)
            .unwrap_or_else(|| panic!("node {node} has no configuration"))
    }

    pub fn has_query(&self) -> bool {
        self.query.is_some()
    }

    pub fn query(&self) -> Option<(&Config, &Config)> {
        self.query.as_ref().map(|q| (&q.start, &q.goal))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        if v.layer == 0 || v.layer > self.depth() {
            return false;
        }
        if is_sentinel(v.node) {
            self.query.is_some()
        } else {
            (v.node as usize) < self.count(v.layer)
        }
    }

    /// Adds start and goal to every layer, replacing any previous query.
    pub fn insert_query(&mut self, start: &Config, goal: &Config) -> Result<(), GraphError> {
        for q in [start, goal] {
            if q.dims() != self.dims() {
                return Err(GraphError::DimensionMismatch {
                    expected: self.dims(),
                    got: q.dims(),
                });
            }
            if !q.in_unit_cube() {
                return Err(GraphError::OutsideUnitCube(q.to_vec()));
            }
        }
        if start == goal {
            return Err(GraphError::DegenerateQuery);
        }
        let rm = &self.roadmap;
        let gap = start.distance(goal);
        let mut start_nbrs = Vec::with_capacity(self.depth());
        let mut goal_nbrs = Vec::with_capacity(self.depth());
        for layer in &rm.layers {
            let mut s = Vec::new();
            Roadmap::radius_query(&rm.configs, rm.dims, layer, start, None, &mut s);
            let mut g = Vec::new();
            Roadmap::radius_query(&rm.configs, rm.dims, layer, goal, None, &mut g);
            if gap < layer.radius {
                s.push(GOAL);
                g.push(START);
            }
            start_nbrs.push(s);
            goal_nbrs.push(g);
        }
        self.query = Some(QuerySlot {
            start: start.clone(),
            goal: goal.clone(),
            start_nbrs,
            goal_nbrs,
        });
        Ok(())
    }

    pub fn clear_query(&mut self) {
        self.query = None;
    }

    /// Dense index of a vertex, in `0..vertex_count()`.
    pub fn vertex_index(&self, v: VertexId) -> usize {
        let rm = &self.roadmap;
        match v.node {
            START => rm.offsets[self.depth()] + 2 * (v.layer - 1),
            GOAL => rm.offsets[self.depth()] + 2 * (v.layer - 1) + 1,
            j => rm.offsets[v.layer - 1] + j as usize,
        }
    }

    /// Number of dense vertex slots, sentinels included.
    pub fn vertex_count(&self) -> usize {
        self.roadmap.offsets[self.depth()] + 2 * self.depth()
    }

    /// Calls `f(neighbor, kind, cost)` for every neighbor of `v`, in
    /// ascending node order, then the vertical neighbor above (sparser
    /// layer) before the one below.
    pub fn visit_neighbors(&self, v: VertexId, mut f: impl FnMut(VertexId, EdgeKind, f64)) {
        debug_assert!(self.contains(v), "{v:?} is not in the graph");
        let rm = &self.roadmap;
        let layer = &rm.layers[v.layer - 1];
        let q = self.config_of(v.node);
        let within = |n: NodeId, f: &mut dyn FnMut(VertexId, EdgeKind, f64)| {
            let cost = distance(q, self.config_of(n));
            f(VertexId::new(v.layer, n), EdgeKind::WithinLayer, cost);
        };
        match v.node {
            START | GOAL => {
                let slot = self.query.as_ref().expect("query inserted");
                let list = if v.node == START {
                    &slot.start_nbrs[v.layer - 1]
                } else {
                    &slot.goal_nbrs[v.layer - 1]
                };
                for &n in list {
                    within(n, &mut f);
                }
            }
            j => {
                match &layer.adjacency {
                    Some((start, nbrs)) => {
                        let (a, b) = (start[j as usize] as usize, start[j as usize + 1] as usize);
                        for &n in &nbrs[a..b] {
                            within(n, &mut f);
                        }
                    }
                    None => {
                        let mut buf = Vec::new();
                        Roadmap::radius_query(&rm.configs, rm.dims, layer, q, Some(j), &mut buf);
                        for n in buf {
                            within(n, &mut f);
                        }
                    }
                }
                if let Some(slot) = &self.query {
                    for (sentinel, sq) in [(START, &slot.start), (GOAL, &slot.goal)] {
                        let d = distance(q, sq);
                        if d < layer.radius {
                            f(VertexId::new(v.layer, sentinel), EdgeKind::WithinLayer, d);
                        }
                    }
                }
            }
        }
        if v.layer > 1 && (is_sentinel(v.node) || (v.node as usize) < self.count(v.layer - 1)) {
            f(VertexId::new(v.layer - 1, v.node), EdgeKind::InterLayer, 0.0);
        }
        if v.layer < self.depth() {
            f(VertexId::new(v.layer + 1, v.node), EdgeKind::InterLayer, 0.0);
        }
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<(Edge, VertexId)> {
        let mut out = Vec::new();
        self.visit_neighbors(v, |to, kind, cost| {
            out.push((
                Edge {
                    from: v,
                    to,
                    kind,
                    cost,
                },
                to,
            ))
        });
        out
    }

    /// All vertices of a layer, sentinels last when a query is present.
    pub fn layer_vertices(&self, layer: usize) -> impl Iterator<Item = VertexId> + '_ {
        let sentinels: &[NodeId] = if self.query.is_some() { &[START, GOAL] } else { &[] };
        (0..self.count(layer) as NodeId)
            .chain(sentinels.iter().copied())
            .map(move |n| VertexId::new(layer, n))
    }

    /// Records swept footprints for every roadmap edge on layers
    /// `1..=max_layer`. Query edges are never included.
    pub fn precompute_swept(&self, cache: &mut SweptCache, max_layer: usize) {
        let rm = &self.roadmap;
        for layer in 1..=max_layer.min(self.depth()) {
            for j in 0..self.count(layer) as NodeId {
                let qj = Config::new(rm.node_config(j).to_vec());
                let mut nbrs = Vec::new();
                Roadmap::radius_query(&rm.configs, rm.dims, &rm.layers[layer - 1], &qj, Some(j), &mut nbrs);
                for k in nbrs.into_iter().filter(|&k| k > j) {
                    let qk = Config::new(rm.node_config(k).to_vec());
                    if !cache.contains(&qj, &qk) {
                        cache.insert(&qj, &qk);
                    }
                }
            }
        }
    }

    const DUMP_MAGIC: &'static [u8; 4] = b"SDLG";

    /// Writes the header `{dims, D, seed, target_degree}` (little endian)
    /// followed by the `n_D` configurations as `f64`. Only the default
    /// power-of-two layering can be dumped.
    pub fn write_dump(&self, mut w: impl Write) -> Result<(), GraphError> {
        let depth = self.depth();
        if self.counts().iter().enumerate().any(|(i, &n)| n != 1 << (i + 1)) {
            return Err(GraphError::Dump("only n_i = 2^i layerings can be dumped".into()));
        }
        let io = |e: io::Error| GraphError::Dump(e.to_string());
        w.write_all(Self::DUMP_MAGIC).map_err(io)?;
        w.write_all(&(self.dims() as u32).to_le_bytes()).map_err(io)?;
        w.write_all(&(depth as u32).to_le_bytes()).map_err(io)?;
        w.write_all(&self.seed().to_le_bytes()).map_err(io)?;
        w.write_all(&self.target_degree().to_le_bytes()).map_err(io)?;
        for v in &self.roadmap.configs {
            w.write_all(&v.to_le_bytes()).map_err(io)?;
        }
        Ok(())
    }

    pub fn read_dump(mut r: impl Read) -> Result<Self, GraphError> {
        let io = |e: io::Error| GraphError::Dump(e.to_string());
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(io)?;
        if &magic != Self::DUMP_MAGIC {
            return Err(GraphError::Dump("bad magic".into()));
        }
        let mut b4 = [0u8; 4];
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b4).map_err(io)?;
        let dims = u32::from_le_bytes(b4) as usize;
        r.read_exact(&mut b4).map_err(io)?;
        let depth = u32::from_le_bytes(b4) as usize;
        r.read_exact(&mut b8).map_err(io)?;
        let seed = u64::from_le_bytes(b8);
        r.read_exact(&mut b8).map_err(io)?;
        let target_degree = f64::from_le_bytes(b8);
        if dims == 0 || depth == 0 || depth >= 32 || target_degree.is_nan() || target_degree <= 0.0 {
            return Err(GraphError::Dump("invalid header".into()));
        }
        let total = 1usize << depth;
        let mut configs = Vec::with_capacity(total * dims);
        for _ in 0..total * dims {
            r.read_exact(&mut b8).map_err(io)?;
            configs.push(f64::from_le_bytes(b8));
        }
        let source = DumpedSource { dims, seed, configs };
        let counts: Vec<usize> = (1..=depth).map(|i| 1usize << i).collect();
        Ok(Self {
            roadmap: Arc::new(Roadmap::from_configs(source, counts, target_degree)),
            query: None,
        })
    }
}

struct DumpedSource {
    dims: usize,
    seed: u64,
    configs: Vec<f64>,
}

impl Roadmap {
    fn from_configs(src: DumpedSource, counts: Vec<usize>, target_degree: f64) -> Self {
        let dims = src.dims;
        let radii: Vec<f64> = counts
            .iter()
            .map(|&n| connection_radius(n, dims, target_degree))
            .collect();
        let layers = counts
            .iter()
            .zip(&radii)
            .map(|(&count, &radius)| {
                let mut layer = Layer {
                    count,
                    radius,
                    index: BucketIndex::build(&src.configs, dims, count, radius),
                    adjacency: None,
                };
                if count <= DEFAULT_ADJACENCY_THRESHOLD {
                    layer.adjacency = Some(Self::adjacency(&src.configs, dims, &layer));
                }
                layer
            })
            .collect();
        let mut offsets = vec![0];
        for &n in &counts {
            offsets.push(offsets.last().unwrap() + n);
        }
        Self {
            dims,
            counts,
            radii,
            configs: src.configs,
            seed: src.seed,
            target_degree,
            layers,
            offsets,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeState {
    Unknown,
    Valid,
    Invalid,
}

/// Collision status of within-layer edges, keyed by the unordered node pair
/// so every layer carrying the same configuration pair shares one entry.
#[derive(Debug, Clone, Default)]
pub struct EdgeStateStore {
    states: FxHashMap<(NodeId, NodeId), bool>,
}

fn pair(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl EdgeStateStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, a: NodeId, b: NodeId) -> EdgeState {
        match self.states.get(&pair(a, b)) {
            None => EdgeState::Unknown,
            Some(true) => EdgeState::Valid,
            Some(false) => EdgeState::Invalid,
        }
    }

    /// Records a collision result. Panics when a known state would flip.
    pub fn set(&mut self, a: NodeId, b: NodeId, state: EdgeState) {
        let valid = match state {
            EdgeState::Valid => true,
            EdgeState::Invalid => false,
            EdgeState::Unknown => panic!("edge states cannot be reset to Unknown"),
        };
        let prev = self.states.insert(pair(a, b), valid);
        assert!(
            prev.is_none() || prev == Some(valid),
            "edge ({a}, {b}) flipped between Valid and Invalid"
        );
    }

    /// Inter-layer edges are always valid and never stored.
    pub fn state(&self, e: &Edge) -> EdgeState {
        match e.kind {
            EdgeKind::InterLayer => EdgeState::Valid,
            EdgeKind::WithinLayer => self.get(e.from.node, e.to.node),
        }
    }

    pub fn set_state(&mut self, e: &Edge, state: EdgeState) {
        if e.kind == EdgeKind::WithinLayer {
            self.set(e.from.node, e.to.node, state);
        }
    }

    /// Forgets every edge touching the start or goal sentinel.
    pub fn clear_sentinels(&mut self) {
        self.states.retain(|&(a, b), _| !is_sentinel(a) && !is_sentinel(b));
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Known edges in ascending key order.
    pub fn iter(&self) -> Vec<((NodeId, NodeId), EdgeState)> {
        let mut all: Vec<_> = self
            .states
            .iter()
            .map(|(&k, &v)| (k, if v { EdgeState::Valid } else { EdgeState::Invalid }))
            .collect();
        all.sort_unstable_by_key(|(k, _)| *k);
        all
    }

    pub fn count(&self, state: EdgeState) -> usize {
        self.states
            .values()
            .filter(|&&v| match state {
                EdgeState::Valid => v,
                EdgeState::Invalid => !v,
                EdgeState::Unknown => false,
            })
            .count()
    }
}
