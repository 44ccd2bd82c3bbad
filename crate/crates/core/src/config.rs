use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

/// A point in the normalized configuration space `[0,1)^dims`.
#[derive(Debug, Clone, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Config(Vec<f64>);

impl Config {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn distance(&self, other: &Config) -> f64 {
        distance(&self.0, &other.0)
    }

    pub fn in_unit_cube(&self) -> bool {
        self.0.iter().all(|v| (0.0..1.0).contains(v))
    }

    /// Linear interpolation `self + t * (other - self)`.
    pub fn lerp(&self, other: &Config, t: f64) -> Config {
        Config(self.0.iter().zip(&other.0).map(|(a, b)| a + (b - a) * t).collect())
    }
}

impl Deref for Config {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for Config {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<Vec<f64>> for Config {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Euclidean distance between two equal-length coordinate slices.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Sum of consecutive Euclidean distances.
pub fn path_cost(path: &[Config]) -> f64 {
    path.windows(2).map(|w| w[0].distance(&w[1])).sum()
}
