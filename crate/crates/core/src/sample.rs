//! Seeded sampling of rational points for probabilistic identity testing.
//!
//! Positive coordinates are drawn as n/d with n, d uniform in 1..=97; every
//! evaluation at a sampled point is exact, so "sampled" mode differs from
//! exact mode only in quantifying over finitely many points.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ratfunc::Rat;

pub const DEFAULT_SEED: u64 = 20231210;

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent deterministic stream for a named check, so parallel suite
    /// execution cannot reorder draws.
    pub fn for_check(seed: u64, name: &str) -> Self {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in name.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        Sampler::new(seed ^ h)
    }

    pub fn rat_pos(&mut self) -> Rat {
        let n: i64 = self.rng.gen_range(1..=97);
        let d: i64 = self.rng.gen_range(1..=97);
        BigRational::new(n.into(), d.into())
    }

    pub fn point_pos(&mut self, arity: usize) -> Vec<Rat> {
        (0..arity).map(|_| self.rat_pos()).collect()
    }

    /// Nonzero rational with a random sign.
    pub fn rat_signed(&mut self) -> Rat {
        let r = self.rat_pos();
        if self.rng.gen_bool(0.5) {
            -r
        } else {
            r
        }
    }

    pub fn point_signed(&mut self, arity: usize) -> Vec<Rat> {
        (0..arity).map(|_| self.rat_signed()).collect()
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }
}
