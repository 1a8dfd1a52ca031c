//! Convergence sweeps over kernel sequences `f_k`.
//!
//! Each element gets its full contraction profile, the exact gap and,
//! optionally, a Monte Carlo estimate of `E|F_k|⁴`. Convergence is shown
//! through decay flags, not asserted as a limit.

use std::path::PathBuf;

use chaosforge_core::families::{gen_diagonal, gen_random_diagonal};
use chaosforge_core::identities::{contraction_profile, exact_moments, ContractionProfile};
use chaosforge_core::KernelTensor;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::formats::read_kernel_sequence;
use crate::mc::{mc_estimate_with_workers, Moment};
use crate::pool;

/// Relative slack for the domination and bound checks.
pub const CHECK_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `d^(−1/2) Σ_a e_a^⊗m ⊗ ē_a^⊗n`
    Diagonal,
    /// Diagonal support with seeded random complex weights, unit norm.
    RandomSparse,
    /// A JSON array of kernel objects.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSpec {
    pub family: Family,
    pub m: usize,
    pub n: usize,
    /// Ignored by the file family, whose dimensions come from the kernels.
    pub dims: Vec<usize>,
    pub seed: u64,
    /// Number of elements; defaults to every listed dimension.
    pub count: Option<usize>,
    pub mc_samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileEntry {
    pub i: usize,
    pub j: usize,
    pub ff: Option<f64>,
    pub fh: Option<f64>,
    pub ff_sym: Option<f64>,
    pub fh_sym: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McSummary {
    pub samples: usize,
    pub seed: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub exact: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub k: usize,
    pub d: usize,
    pub profile: Vec<ProfileEntry>,
    pub max_plain: f64,
    pub max_symmetrized: f64,
    pub gap: f64,
    pub gap_bound: f64,
    pub symmetrized_dominated: bool,
    pub mc_fourth_moment: Option<McSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepFlags {
    pub plain_norms_decreasing: bool,
    pub symmetrized_norms_decreasing: bool,
    pub gap_decreasing: bool,
    pub symmetrized_dominated: bool,
    pub gap_within_bound: bool,
    /// `gap(d)·d` is constant within `CHECK_SLACK` relative.
    pub gap_times_dim_constant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
    pub flags: SweepFlags,
}

fn validate_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(HarnessError::Invalid(
            "dims must be a nonempty list of positive integers".into(),
        ));
    }
    if dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::Invalid(format!(
            "dims must be strictly increasing, got {dims:?}"
        )));
    }
    Ok(())
}

/// Materializes the sequence described by `spec`.
pub fn sequence_kernels(spec: &SequenceSpec) -> Result<Vec<KernelTensor>> {
    if spec.m + spec.n < 2 {
        return Err(HarnessError::Invalid("sweeps need m + n ≥ 2".into()));
    }
    let kernels = match &spec.family {
        Family::File(path) => {
            let ks = read_kernel_sequence(path)?;
            if let Some(k) = ks.iter().find(|k| (k.m(), k.n()) != (spec.m, spec.n)) {
                return Err(HarnessError::Invalid(format!(
                    "sequence file holds a ({},{}) kernel, expected ({},{})",
                    k.m(),
                    k.n(),
                    spec.m,
                    spec.n
                )));
            }
            ks
        }
        Family::Diagonal => {
            validate_dims(&spec.dims)?;
            spec.dims
                .iter()
                .map(|&d| gen_diagonal(spec.m, spec.n, d))
                .collect::<std::result::Result<_, _>>()?
        }
        Family::RandomSparse => {
            validate_dims(&spec.dims)?;
            spec.dims
                .iter()
                .enumerate()
                .map(|(k, &d)| {
                    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                    rng.set_stream(k as u64);
                    gen_random_diagonal(spec.m, spec.n, d, &mut rng)
                })
                .collect::<std::result::Result<_, _>>()?
        }
    };
    let dims: Vec<usize> = kernels.iter().map(KernelTensor::dim).collect();
    validate_dims(&dims)?;
    let count = spec.count.unwrap_or(kernels.len());
    if count == 0 || count > kernels.len() {
        return Err(HarnessError::Invalid(format!(
            "count {count} outside 1..={}",
            kernels.len()
        )));
    }
    Ok(kernels.into_iter().take(count).collect())
}

pub fn sweep_theorem(spec: &SequenceSpec) -> Result<SweepResult> {
    let kernels = sequence_kernels(spec)?;
    sweep_kernels(&kernels, spec.seed, spec.mc_samples)
}

/// Per-element Monte Carlo seed, mixed from the master seed and index.
pub fn case_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn profile_entries(p: &ContractionProfile) -> Vec<ProfileEntry> {
    p.entries
        .iter()
        .map(|e| ProfileEntry {
            i: e.i,
            j: e.j,
            ff: e.ff,
            fh: e.fh,
            ff_sym: e.ff_sym,
            fh_sym: e.fh_sym,
        })
        .collect()
}

fn strictly_decreasing(xs: impl Iterator<Item = f64>) -> bool {
    let xs: Vec<f64> = xs.collect();
    xs.len() >= 2 && xs.windows(2).all(|w| w[1] < w[0])
}

/// Sweeps an arbitrary sequence. Dimensions need not increase here, which
/// allows negative controls such as a repeated kernel.
pub fn sweep_kernels(
    kernels: &[KernelTensor],
    seed: u64,
    mc_samples: Option<usize>,
) -> Result<SweepResult> {
    let first = kernels
        .first()
        .ok_or_else(|| HarnessError::Invalid("empty kernel sequence".into()))?;
    let (m, n) = (first.m(), first.n());
    if kernels.iter().any(|k| (k.m(), k.n()) != (m, n)) {
        return Err(HarnessError::Invalid(
            "all sequence elements must share (m, n)".into(),
        ));
    }
    let rows = pool::map_indexed(kernels.len(), pool::worker_count(), |k| {
        sweep_row(k, &kernels[k], seed, mc_samples)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let gd: Vec<f64> = rows.iter().map(|r| r.gap * r.d as f64).collect();
    let flags = SweepFlags {
        plain_norms_decreasing: strictly_decreasing(rows.iter().map(|r| r.max_plain)),
        symmetrized_norms_decreasing: strictly_decreasing(rows.iter().map(|r| r.max_symmetrized)),
        gap_decreasing: strictly_decreasing(rows.iter().map(|r| r.gap)),
        symmetrized_dominated: rows.iter().all(|r| r.symmetrized_dominated),
        gap_within_bound: rows
            .iter()
            .all(|r| r.gap <= r.gap_bound * (1.0 + CHECK_SLACK) + CHECK_SLACK),
        gap_times_dim_constant: gd
            .iter()
            .all(|&x| (x - gd[0]).abs() <= CHECK_SLACK * gd[0].abs().max(1.0)),
    };
    Ok(SweepResult {
        m,
        n,
        seed,
        rows,
        flags,
    })
}

fn sweep_row(k: usize, f: &KernelTensor, seed: u64, mc_samples: Option<usize>) -> Result<SweepRow> {
    let profile = contraction_profile(f)?;
    let moments = exact_moments(f)?;
    let gap = moments.gap();
    if !gap.is_finite() {
        return Err(HarnessError::Invalid(format!(
            "non-finite gap at element {k}"
        )));
    }
    let mc_fourth_moment = match mc_samples {
        None => None,
        Some(samples) => {
            let s = case_seed(seed, k);
            // rows are already spread over workers
            let est = mc_estimate_with_workers(f, Moment::M4, samples, s, 1)?;
            Some(McSummary {
                samples,
                seed: s,
                estimate: est.estimate.re,
                stderr: est.stderr,
                exact: moments.abs4,
            })
        }
    };
    Ok(SweepRow {
        k,
        d: f.dim(),
        profile: profile_entries(&profile),
        max_plain: profile.max_plain(),
        max_symmetrized: profile.max_symmetrized(),
        gap,
        gap_bound: profile.gap_upper_bound(),
        symmetrized_dominated: profile.symmetrized_dominated(CHECK_SLACK),
        mc_fourth_moment,
    })
}

impl McSummary {
    pub fn z_score(&self) -> f64 {
        let dist = (self.estimate - self.exact).abs();
        if dist == 0.0 {
            0.0
        } else {
            dist / self.stderr
        }
    }
}
