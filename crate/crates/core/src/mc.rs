//! Seeded, chunked Monte Carlo.
//!
//! Sample `i` lives in chunk `i / chunk_size`; every chunk draws from its own
//! ChaCha8 stream derived from `(seed, chunk index)` and partial sums are
//! combined in chunk order, so results are bit-identical for a given
//! `(seed, chunk_size)` whatever the rayon pool size.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub const DEFAULT_CHUNK_SIZE: usize = 4096;

pub type McRng = ChaCha8Rng;

/// Mean, standard error and sample count of a Monte Carlo estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: Complex64,
    pub std_error: f64,
    pub n_samples: usize,
}

impl MCEstimate {
    /// `|mean − target| / std_error`; zero when both the error and the
    /// deviation vanish, infinite when only the error does.
    pub fn z_score(&self, target: Complex64) -> f64 {
        let dev = (self.mean - target).norm();
        if self.std_error > 0.0 {
            dev / self.std_error
        } else if dev <= 1e-12 * target.norm().max(1.0) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// Whether `target` lies within `k` standard errors plus `slack`.
    pub fn within(&self, target: Complex64, k: f64, slack: f64) -> bool {
        (self.mean - target).norm() <= k * self.std_error + slack
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub n_samples: usize,
    pub seed: u64,
    pub chunk_size: usize,
}

#[derive(Clone)]
struct Partial {
    sum: Vec<Complex64>,
    sum_sq: Vec<f64>,
}

impl MonteCarlo {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        Self { n_samples, seed, chunk_size: DEFAULT_CHUNK_SIZE }
    }

    pub fn with_chunk_size(mut self, chunk_size: usize) -> Self {
        self.chunk_size = chunk_size;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(invalid("Monte Carlo needs at least one sample"));
        }
        if self.chunk_size == 0 {
            return Err(invalid("chunk size must be positive"));
        }
        Ok(())
    }

    /// RNG for chunk `index`.
    pub fn chunk_rng(&self, index: u64) -> McRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// Estimates the means of `width` complex quantities. `sample` fills one
    /// draw of all of them.
    pub fn estimate<F>(&self, width: usize, sample: F) -> Result<Vec<MCEstimate>>
    where
        F: Fn(&mut McRng, &mut [Complex64]) + Sync,
    {
        self.validate()?;
        let n_chunks = self.n_samples.div_ceil(self.chunk_size);
        let partials: Vec<Partial> = (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = self.chunk_rng(c as u64);
                let start = c * self.chunk_size;
                let end = (start + self.chunk_size).min(self.n_samples);
                let mut buf = vec![Complex64::new(0.0, 0.0); width];
                let mut p = Partial {
                    sum: vec![Complex64::new(0.0, 0.0); width],
                    sum_sq: vec![0.0; width],
                };
                for _ in start..end {
                    sample(&mut rng, &mut buf);
                    for (j, v) in buf.iter().enumerate() {
                        p.sum[j] += v;
                        p.sum_sq[j] += v.norm_sqr();
                    }
                }
                p
            })
            .collect();

        let mut sum = vec![Complex64::new(0.0, 0.0); width];
        let mut sum_sq = vec![0.0; width];
        for p in &partials {
            for j in 0..width {
                sum[j] += p.sum[j];
                sum_sq[j] += p.sum_sq[j];
            }
        }
        let n = self.n_samples as f64;
        Ok((0..width)
            .map(|j| {
                let mean = sum[j] / n;
                let var = if self.n_samples > 1 {
                    ((sum_sq[j] - n * mean.norm_sqr()) / (n - 1.0)).max(0.0)
                } else {
                    0.0
                };
                MCEstimate { mean, std_error: (var / n).sqrt(), n_samples: self.n_samples }
            })
            .collect())
    }

    /// Single-quantity form of [`estimate`](Self::estimate).
    pub fn estimate_scalar<F>(&self, sample: F) -> Result<MCEstimate>
    where
        F: Fn(&mut McRng) -> Complex64 + Sync,
    {
        Ok(self.estimate(1, |rng, out| out[0] = sample(rng))?[0])
    }
}
