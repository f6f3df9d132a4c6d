//! Deterministic parallel Monte Carlo.
//!
//! Trials are split into fixed-size chunks. Chunk `k` draws from a ChaCha8
//! stream keyed by `(seed, k)`, chunks run in parallel, and partial sums are
//! combined in chunk order, so the result does not depend on the number of
//! worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Trials per chunk.
pub const CHUNK: usize = 4096;

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl McEstimate {
    /// Number of standard errors separating the estimate from `target`.
    pub fn sigmas_from(&self, target: f64) -> f64 {
        (self.mean - target).abs() / self.std_error
    }
}

/// RNG for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Mean of `trial` over `samples` draws.
pub fn estimate<F>(samples: usize, seed: u64, trial: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    match try_estimate(samples, seed, |rng| Ok::<_, std::convert::Infallible>(trial(rng))) {
        Ok(e) => e,
        Err(never) => match never {},
    }
}

/// Like [`estimate`] for fallible trials. The error reported is the one from
/// the earliest failing chunk.
pub fn try_estimate<F, E>(samples: usize, seed: u64, trial: F) -> Result<McEstimate, E>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64, E> + Sync,
    E: Send,
{
    assert!(samples > 0, "Monte Carlo needs at least one sample");
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<Result<(f64, f64), E>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = chunk_rng(seed, k as u64);
            let len = CHUNK.min(samples - k * CHUNK);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..len {
                let x = trial(&mut rng)?;
                sum += x;
                sum_sq += x * x;
            }
            Ok((sum, sum_sq))
        })
        .collect();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for p in partial {
        let (a, b) = p?;
        sum += a;
        sum_sq += b;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = if samples > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(McEstimate { mean, std_error: (var / n).sqrt(), samples })
}
