//! Seeded, sharded Monte Carlo averaging.
//!
//! Shard `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`, so a
//! given `(seed, shards, samples)` triple reproduces bit-for-bit regardless
//! of how many threads rayon uses. Sums are pairwise and shard results are
//! combined in shard order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::scalar::Real;

/// Sample count, seed and shard count for one Monte Carlo estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplingPlan {
    pub samples: usize,
    pub seed: u64,
    pub shards: usize,
}

impl SamplingPlan {
    pub fn new(samples: usize, seed: u64, shards: usize) -> Self {
        Self { samples, seed, shards: shards.max(1) }
    }

    fn shard_sizes(&self) -> Vec<usize> {
        let base = self.samples / self.shards;
        let extra = self.samples % self.shards;
        (0..self.shards).map(|i| base + usize::from(i < extra)).collect()
    }
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanEstimate<T> {
    pub mean: T,
    pub std_error: T,
    pub samples: usize,
}

/// Averages `draw` over `plan.samples` independent draws.
pub fn estimate_mean<T, F>(plan: &SamplingPlan, draw: F) -> MeanEstimate<T>
where
    T: Real,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let shards: Vec<Vec<T>> = plan
        .shard_sizes()
        .into_par_iter()
        .enumerate()
        .map(|(i, count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
            rng.set_stream(i as u64);
            (0..count).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    let n = plan.samples;
    if n == 0 {
        return MeanEstimate { mean: T::nan(), std_error: T::nan(), samples: 0 };
    }
    let sums: Vec<T> = shards.iter().map(|v| pairwise_sum(v)).collect();
    let mean = pairwise_sum(&sums) / T::from_count(n);
    let sq: Vec<T> = shards
        .par_iter()
        .map(|v| {
            let dev: Vec<T> = v.iter().map(|&x| (x - mean) * (x - mean)).collect();
            pairwise_sum(&dev)
        })
        .collect();
    let var = if n > 1 { pairwise_sum(&sq) / T::from_count(n - 1) } else { T::zero() };
    MeanEstimate { mean, std_error: (var / T::from_count(n)).sqrt(), samples: n }
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    const BLOCK: usize = 128;
    if xs.len() <= BLOCK {
        return xs.iter().fold(T::zero(), |s, &x| s + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
