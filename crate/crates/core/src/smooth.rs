//! Random shortcut smoothing over continuous arc-length cut points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{path_cost, Config};
use crate::world::{CheckOrder, CollisionWorld};

/// A splice must shorten the path by more than this.
const MIN_GAIN: f64 = 1e-12;

pub const DEFAULT_SMOOTH_ITERATIONS: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothParams {
    pub iterations: usize,
    pub seed: u64,
}

impl Default for SmoothParams {
    fn default() -> Self {
        Self {
            iterations: DEFAULT_SMOOTH_ITERATIONS,
            seed: 0,
        }
    }
}

/// Point at arc length `t` along `path`, with the index of its segment.
fn point_at(path: &[Config], cumulative: &[f64], t: f64) -> (usize, Config) {
    let seg = match cumulative.binary_search_by(|c| c.total_cmp(&t)) {
        Ok(i) => i.min(path.len() - 2),
        Err(i) => i.saturating_sub(1).min(path.len() - 2),
    };
    let len = cumulative[seg + 1] - cumulative[seg];
    let u = if len > 0.0 {
        ((t - cumulative[seg]) / len).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = if u == 0.0 {
        path[seg].clone()
    } else if u == 1.0 {
        path[seg + 1].clone()
    } else {
        path[seg].lerp(&path[seg + 1], u)
    };
    (seg, q)
}

/// Repeatedly picks two arc-length positions along the path and replaces
/// the stretch between them with a straight segment when the result is
/// strictly shorter and every new segment is collision free. Endpoints
/// never move, and the world's check step governs the validity test.
pub fn shortcut(world: &mut CollisionWorld, path: &[Config], params: &SmoothParams) -> Vec<Config> {
    let mut path: Vec<Config> = path.to_vec();
    if path.len() < 2 {
        return path;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.iterations {
        let mut cumulative = Vec::with_capacity(path.len());
        cumulative.push(0.0);
        for w in path.windows(2) {
            cumulative.push(cumulative.last().unwrap() + w[0].distance(&w[1]));
        }
        let total = *cumulative.last().unwrap();
        let (a, b) = (rng.gen::<f64>() * total, rng.gen::<f64>() * total);
        let (t1, t2) = if a <= b { (a, b) } else { (b, a) };
        let (s1, p1) = point_at(&path, &cumulative, t1);
        let (s2, p2) = point_at(&path, &cumulative, t2);
        if s1 == s2 || p1.distance(&p2) >= (t2 - t1) - MIN_GAIN {
            continue;
        }
        // The partial segments sample different points than the edges they
        // cut, so they are checked too.
        let ok = [(&path[s1], &p1), (&p1, &p2), (&p2, &path[s2 + 1])]
            .into_iter()
            .all(|(a, b)| a == b || world.is_edge_valid(a, b, CheckOrder::InOrder).unwrap_or(false));
        if !ok {
            continue;
        }
        let before = path_cost(&path);
        let mut next: Vec<Config> = path[..=s1].to_vec();
        for q in [p1, p2] {
            if next.last() != Some(&q) {
                next.push(q);
            }
        }
        for q in &path[s2 + 1..] {
            if next.last() != Some(q) {
                next.push(q.clone());
            }
        }
        debug_assert!(path_cost(&next) <= before);
        path = next;
    }
    path
}
