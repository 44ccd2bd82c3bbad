//! Halton low-discrepancy configuration source with a seeded offset.
//!
//! The sequence is indexed from 1: index 0 maps to the origin in every base,
//! which would duplicate the corner point once the offset wraps.

use crate::config::Config;

/// SplitMix64 generator.
///
/// Update rule: `state += 0x9E3779B97F4A7C15`, then the output is mixed with
/// the multipliers `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB` and shifts
/// 30, 27 and 31. These constants are pinned so offsets are reproducible
/// across implementations.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(Self::GAMMA);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// The SplitMix64 output finalizer. Also used to derive per-edge seeds.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Base-`base` digit reversal of `index`, as a fraction in `[0, 1)`.
pub fn radical_inverse(mut index: u64, base: u32) -> f64 {
    debug_assert!(base >= 2);
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut factor = inv;
    let mut value = 0.0;
    while index > 0 {
        value += (index % b) as f64 * factor;
        index /= b;
        factor *= inv;
    }
    value
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u32> {
    let mut primes: Vec<u32> = Vec::with_capacity(count);
    let mut candidate = 2u32;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// A deterministic, stateless source of configurations in `[0,1)^dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct HaltonSource {
    dims: usize,
    bases: Vec<u32>,
    offset: Vec<f64>,
    seed: u64,
}

impl HaltonSource {
    /// Builds a source whose offset is drawn from SplitMix64 seeded with `seed`,
    /// one draw per dimension.
    pub fn new(dims: usize, seed: u64) -> Self {
        assert!(dims >= 1, "Halton source needs at least one dimension");
        let mut rng = SplitMix64::new(seed);
        let offset = (0..dims).map(|_| rng.next_f64()).collect();
        Self {
            dims,
            bases: first_primes(dims),
            offset,
            seed,
        }
    }

    /// Builds a source with an explicit offset (each component in `[0, 1)`).
    pub fn with_offset(offset: Vec<f64>) -> Self {
        assert!(!offset.is_empty());
        assert!(offset.iter().all(|o| (0.0..1.0).contains(o)));
        Self {
            dims: offset.len(),
            bases: first_primes(offset.len()),
            offset,
            seed: 0,
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The configuration at `index` (1-based).
    pub fn config_at(&self, index: u64) -> Config {
        assert!(index >= 1, "Halton indices start at 1");
        let mut values = Vec::with_capacity(self.dims);
        for (&base, &off) in self.bases.iter().zip(&self.offset) {
            values.push(wrap_unit(radical_inverse(index, base) + off));
        }
        Config::new(values)
    }

    /// The first `count` configurations, i.e. indices `1..=count`.
    pub fn take(&self, count: usize) -> Vec<Config> {
        (1..=count as u64).map(|i| self.config_at(i)).collect()
    }
}

fn wrap_unit(x: f64) -> f64 {
    let f = x - x.floor();
    // x.floor() can round such that f == 1.0 for x just below an integer.
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}
