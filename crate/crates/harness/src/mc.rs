//! Sharded Monte Carlo estimates of `E|F|²`, `E|F|⁴` and `E[F²]`.
//!
//! The draw budget is split over a fixed number of shards. Shard `s` draws
//! from `ChaCha8Rng::seed_from_u64(seed)` on stream `s`, keeps a running
//! mean and centered sum of squares, and shards are merged in index order.
//! The estimate is therefore a function of `(f, moment, N, seed)` alone.

use std::str::FromStr;

use chaosforge_core::sampling::sample_gaussian;
use chaosforge_core::{ChaosElement, Complex64, KernelTensor};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::pool;

pub const SHARDS: usize = 64;
pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Moment {
    /// `|F|²`
    M2,
    /// `|F|⁴`
    M4,
    /// `F²`, complex
    F2,
}

impl Moment {
    fn statistic(self, v: Complex64) -> Complex64 {
        match self {
            Moment::M2 => Complex64::new(v.norm_sqr(), 0.0),
            Moment::M4 => Complex64::new(v.norm_sqr() * v.norm_sqr(), 0.0),
            Moment::F2 => v * v,
        }
    }
}

impl FromStr for Moment {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m2" => Ok(Self::M2),
            "m4" => Ok(Self::M4),
            "f2" => Ok(Self::F2),
            other => Err(HarnessError::Invalid(format!("unknown moment `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub moment: Moment,
    pub samples: usize,
    pub seed: u64,
    pub estimate: Complex64,
    /// Sample standard deviation over `√N`; for `F²` the deviation is
    /// taken in modulus.
    pub stderr: f64,
}

impl McEstimate {
    /// Distance from `target` in standard errors. Infinite when the
    /// estimate is off but `stderr` is zero.
    pub fn z_score(&self, target: Complex64) -> f64 {
        let dist = (self.estimate - target).norm();
        if dist == 0.0 {
            0.0
        } else {
            dist / self.stderr
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Running {
    count: usize,
    mean: Complex64,
    ss: f64,
}

impl Running {
    fn new() -> Self {
        Self {
            count: 0,
            mean: Complex64::new(0.0, 0.0),
            ss: 0.0,
        }
    }

    fn push(&mut self, x: Complex64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.ss += (delta.conj() * (x - self.mean)).re;
    }

    fn merge(self, other: Self) -> Self {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let count = self.count + other.count;
        let (na, nb) = (self.count as f64, other.count as f64);
        let delta = other.mean - self.mean;
        Self {
            count,
            mean: self.mean + delta * (nb / count as f64),
            ss: self.ss + other.ss + delta.norm_sqr() * na * nb / count as f64,
        }
    }
}

fn shard_size(samples: usize, shard: usize) -> usize {
    samples / SHARDS + usize::from(shard < samples % SHARDS)
}

fn run_shard(f: &ChaosElement, moment: Moment, samples: usize, seed: u64, shard: usize) -> Running {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    let mut acc = Running::new();
    for _ in 0..shard_size(samples, shard) {
        let s = sample_gaussian(f.dim(), &mut rng);
        let v = f.evaluate(&s).expect("sample dimension matches");
        acc.push(moment.statistic(v));
    }
    acc
}

/// Estimate with the worker cap taken from `CHAOSFORGE_THREADS`.
pub fn mc_estimate(
    f: &KernelTensor,
    moment: Moment,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    mc_estimate_with_workers(f, moment, samples, seed, pool::worker_count())
}

pub fn mc_estimate_with_workers(
    f: &KernelTensor,
    moment: Moment,
    samples: usize,
    seed: u64,
    workers: usize,
) -> Result<McEstimate> {
    if samples < MIN_SAMPLES {
        return Err(HarnessError::Invalid(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let big_f = ChaosElement::integral(f);
    let shards = pool::map_indexed(SHARDS, workers, |s| {
        run_shard(&big_f, moment, samples, seed, s)
    });
    let total = shards.into_iter().fold(Running::new(), Running::merge);
    let var = total.ss / (total.count as f64 - 1.0);
    Ok(McEstimate {
        moment,
        samples,
        seed,
        estimate: total.mean,
        stderr: (var / total.count as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shard_sizes_cover_the_budget() {
        for samples in [1000, 1001, 100_000, 12_345] {
            let total: usize = (0..SHARDS).map(|s| shard_size(samples, s)).sum();
            assert_eq!(total, samples);
        }
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<Complex64> = (0..50)
            .map(|k| Complex64::new((k as f64).sin(), (k * k) as f64 * 0.01))
            .collect();
        let mut whole = Running::new();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (Running::new(), Running::new());
        xs[..17].iter().for_each(|&x| a.push(x));
        xs[17..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert_eq!(merged.count, whole.count);
        assert!((merged.mean - whole.mean).norm() < 1e-14);
        assert!((merged.ss - whole.ss).abs() < 1e-12);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let k = KernelTensor::basis(1, &[0], &[0]).unwrap();
        assert!(mc_estimate_with_workers(&k, Moment::M2, 999, 1, 1).is_err());
    }

    #[test]
    fn zero_kernel_is_exactly_zero() {
        let k = KernelTensor::zeros(2, 1, 1).unwrap();
        for moment in [Moment::M2, Moment::M4, Moment::F2] {
            let est = mc_estimate_with_workers(&k, moment, 2000, 3, 2).unwrap();
            assert_eq!(est.estimate, Complex64::new(0.0, 0.0));
            assert_eq!(est.stderr, 0.0);
        }
    }
}
