//! Independent reference implementations for the integration tests: a
//! brute-force layered graph, Dijkstra over it, and random instances.
#![allow(dead_code)]

pub mod theory;

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdplan_core::graph::{NodeId, VertexId, GOAL, START};
use sdplan_core::world::{CellRect, CheckOrder, CollisionWorld, GridFrame, OccupancyGrid, RobotModel};
use sdplan_core::{Config, EdgeState, EdgeStateStore, HaltonSource, LayeredGraph};

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// The layered graph rebuilt from raw configurations and radii by O(n^2)
/// pair scans. Oracle index `n_D` is the start and `n_D + 1` the goal.
pub struct OracleGraph {
    pub configs: Vec<Vec<f64>>,
    pub counts: Vec<usize>,
    pub radii: Vec<f64>,
    pub has_query: bool,
}

impl OracleGraph {
    pub fn from_graph(g: &LayeredGraph) -> Self {
        let total = *g.counts().last().unwrap();
        let mut configs: Vec<Vec<f64>> = (0..total as NodeId).map(|j| g.config_of(j).to_vec()).collect();
        let has_query = g.has_query();
        if has_query {
            configs.push(g.config_of(START).to_vec());
            configs.push(g.config_of(GOAL).to_vec());
        }
        Self {
            configs,
            counts: g.counts().to_vec(),
            radii: g.radii().to_vec(),
            has_query,
        }
    }

    pub fn depth(&self) -> usize {
        self.counts.len()
    }

    pub fn start(&self) -> usize {
        *self.counts.last().unwrap()
    }

    pub fn goal(&self) -> usize {
        self.start() + 1
    }

    pub fn node_id(&self, idx: usize) -> NodeId {
        if idx == self.start() {
            START
        } else if idx == self.goal() {
            GOAL
        } else {
            idx as NodeId
        }
    }

    pub fn index_of(&self, node: NodeId) -> usize {
        match node {
            START => self.start(),
            GOAL => self.goal(),
            j => j as usize,
        }
    }

    /// Oracle indices present on a layer.
    pub fn members(&self, layer: usize) -> Vec<usize> {
        let mut m: Vec<usize> = (0..self.counts[layer - 1]).collect();
        if self.has_query {
            m.push(self.start());
            m.push(self.goal());
        }
        m
    }

    pub fn within_neighbors(&self, layer: usize, idx: usize) -> Vec<usize> {
        let r = self.radii[layer - 1];
        self.members(layer)
            .into_iter()
            .filter(|&k| k != idx && dist(&self.configs[idx], &self.configs[k]) < r)
            .collect()
    }

    pub fn cost(&self, a: usize, b: usize) -> f64 {
        dist(&self.configs[a], &self.configs[b])
    }

    fn on_layer(&self, layer: usize, idx: usize) -> bool {
        idx < self.counts[layer - 1] || (self.has_query && idx >= self.start())
    }

    /// Dijkstra from every copy of the start on `layers` (ascending,
    /// contiguous). `valid(a, b)` decides within-layer edges.
    pub fn dijkstra(&self, layers: &[usize], valid: &mut dyn FnMut(usize, usize) -> bool) -> Distances {
        self.dijkstra_from(self.start(), layers, valid)
    }

    pub fn dijkstra_from(
        &self,
        source: usize,
        layers: &[usize],
        valid: &mut dyn FnMut(usize, usize) -> bool,
    ) -> Distances {
        let adjacency: HashMap<usize, Vec<Vec<usize>>> = layers
            .iter()
            .map(|&l| {
                let lists = (0..self.configs.len())
                    .map(|i| {
                        if self.on_layer(l, i) {
                            self.within_neighbors(l, i)
                        } else {
                            Vec::new()
                        }
                    })
                    .collect();
                (l, lists)
            })
            .collect();
        let mut d: HashMap<(usize, usize), f64> = HashMap::new();
        let mut parent: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        let mut heap = BinaryHeap::new();
        for &l in layers {
            d.insert((l, source), 0.0);
            heap.push(Item(0.0, l, source));
        }
        while let Some(Item(c, l, i)) = heap.pop() {
            if c > d[&(l, i)] {
                continue;
            }
            let mut relax = |to: (usize, usize), nc: f64, heap: &mut BinaryHeap<Item>| {
                if d.get(&to).is_none_or(|&old| nc < old) {
                    d.insert(to, nc);
                    parent.insert(to, (l, i));
                    heap.push(Item(nc, to.0, to.1));
                }
            };
            for &k in &adjacency[&l][i] {
                if valid(i, k) {
                    relax((l, k), c + self.cost(i, k), &mut heap);
                }
            }
            for nl in [l.wrapping_sub(1), l + 1] {
                if layers.contains(&nl) && self.on_layer(nl, i) {
                    relax((nl, i), c, &mut heap);
                }
            }
        }
        Distances { d, parent }
    }
}

pub struct Distances {
    pub d: HashMap<(usize, usize), f64>,
    pub parent: HashMap<(usize, usize), (usize, usize)>,
}

impl Distances {
    pub fn get(&self, layer: usize, idx: usize) -> f64 {
        self.d.get(&(layer, idx)).copied().unwrap_or(f64::INFINITY)
    }

    /// Smallest distance to `idx` over the given layers.
    pub fn best(&self, idx: usize, layers: &[usize]) -> f64 {
        layers.iter().map(|&l| self.get(l, idx)).fold(f64::INFINITY, f64::min)
    }

    /// Oracle indices along the shortest path to `(layer, idx)`, vertical
    /// hops collapsed.
    pub fn path_to(&self, layer: usize, idx: usize) -> Vec<usize> {
        let mut out = vec![idx];
        let mut cur = (layer, idx);
        while let Some(&p) = self.parent.get(&cur) {
            if p.1 != *out.last().unwrap() {
                out.push(p.1);
            }
            cur = p;
        }
        out.reverse();
        out
    }
}

#[derive(PartialEq)]
struct Item(f64, usize, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then((other.1, other.2).cmp(&(self.1, self.2)))
    }
}

/// Memoized ground-truth edge validity, checked on a private world copy.
pub struct TruthTable<'a> {
    world: CollisionWorld,
    oracle: &'a OracleGraph,
    memo: HashMap<(usize, usize), bool>,
}

impl<'a> TruthTable<'a> {
    pub fn new(world: &CollisionWorld, oracle: &'a OracleGraph) -> Self {
        let mut world = world.fork();
        world.detach_swept_cache();
        Self {
            world,
            oracle,
            memo: HashMap::new(),
        }
    }

    pub fn valid(&mut self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let qa = Config::new(self.oracle.configs[key.0].clone());
        let qb = Config::new(self.oracle.configs[key.1].clone());
        let v = self.world.is_edge_valid(&qa, &qb, CheckOrder::InOrder).unwrap();
        self.memo.insert(key, v);
        v
    }
}

/// Edge validity as the optimistic graph sees it.
pub fn optimistic<'a>(store: &'a EdgeStateStore, oracle: &'a OracleGraph) -> impl Fn(usize, usize) -> bool + 'a {
    move |a, b| store.get(oracle.node_id(a), oracle.node_id(b)) != EdgeState::Invalid
}

pub struct Instance {
    pub world: CollisionWorld,
    pub graph: LayeredGraph,
    pub start: Config,
    pub goal: Config,
}

pub fn world_from_rects(cells: usize, rects: &[CellRect], radius: f64, step: f64) -> CollisionWorld {
    let frame = GridFrame::new(cells, cells, 1.0 / cells as f64);
    CollisionWorld::new(
        Arc::new(OccupancyGrid::from_rects(frame, rects)),
        Arc::new(RobotModel::Point { radius }),
        step,
    )
}

pub fn random_rects(rng: &mut ChaCha8Rng, cells: usize, count: usize, min: usize, max: usize) -> Vec<CellRect> {
    (0..count)
        .map(|_| {
            let w = rng.gen_range(min..=max);
            let h = rng.gen_range(min..=max);
            let x0 = rng.gen_range(0..cells - w);
            let y0 = rng.gen_range(0..cells - h);
            CellRect::new(x0, y0, x0 + w - 1, y0 + h - 1)
        })
        .collect()
}

pub fn random_free_config(rng: &mut ChaCha8Rng, world: &mut CollisionWorld) -> Config {
    loop {
        let q = Config::new((0..world.dims()).map(|_| rng.gen::<f64>()).collect());
        if world.is_config_valid(&q).unwrap() {
            return q;
        }
    }
}

/// A random 40x40 point-robot world with up to `max_rects` obstacles, free
/// start and goal at least 0.3 apart, and a graph of `depth` layers.
pub fn random_instance(seed: u64, depth: usize, max_rects: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = 40;
    let count = rng.gen_range(0..=max_rects);
    let rects = random_rects(&mut rng, cells, count, 2, 14);
    let mut world = world_from_rects(cells, &rects, 0.0, 0.01);
    let (start, goal) = loop {
        let s = random_free_config(&mut rng, &mut world);
        let g = random_free_config(&mut rng, &mut world);
        if s.distance(&g) >= 0.3 {
            break (s, g);
        }
    };
    let mut graph = LayeredGraph::build(&HaltonSource::new(2, rng.gen()), depth, 30.0);
    graph.insert_query(&start, &goal).unwrap();
    world.reset_counters();
    Instance {
        world,
        graph,
        start,
        goal,
    }
}

/// Converts an oracle-side vertex to the graph's vertex id.
pub fn vertex(oracle: &OracleGraph, layer: usize, idx: usize) -> VertexId {
    VertexId::new(layer, oracle.node_id(idx))
}
