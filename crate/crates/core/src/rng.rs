//! Seedable uniform random stream.
//!
//! The generator is xoshiro256++ whose 256-bit state is filled with the first
//! four outputs of SplitMix64 started at the user seed. A uniform draw on
//! `[0, 1)` takes the top 53 bits of the next 64-bit output and scales by
//! `2^-53`. Both pieces are integer-only, so a given seed produces the same
//! sequence on every platform.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Source of uniform draws on `[0, 1)`.
///
/// The solvers only ever consume randomness through this trait, which lets
/// tests pin `r1`/`r2` with a scripted source.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;

    /// Uniform index in `0..len`. `len` must be nonzero.
    fn next_index(&mut self, len: usize) -> usize {
        debug_assert!(len > 0);
        let i = (self.next_uniform() * len as f64) as usize;
        i.min(len - 1)
    }
}

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: Xoshiro256PlusPlus,
    draws: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
            draws: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of uniform draws consumed so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn next_u64(&mut self) -> u64 {
        self.draws += 1;
        self.inner.next_u64()
    }
}

impl UniformSource for RngStream {
    fn next_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Replays a fixed list of draws, cycling when exhausted.
#[derive(Debug, Clone)]
pub struct ScriptedSource {
    values: Vec<f64>,
    pos: usize,
}

impl ScriptedSource {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "scripted source needs at least one value");
        Self { values, pos: 0 }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(vec![value])
    }
}

impl UniformSource for ScriptedSource {
    fn next_uniform(&mut self) -> f64 {
        let v = self.values[self.pos % self.values.len()];
        self.pos += 1;
        v
    }
}
