//! Kernel generators.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::sampling::complex_normal;
use crate::tensor::KernelTensor;

/// `d^(−1/2) · Σ_a e_a^⊗m ⊗ ē_a^⊗n`: unit norm, and every proper
/// contraction has squared norm `1/d`.
pub fn gen_diagonal(m: usize, n: usize, dim: usize) -> Result<KernelTensor> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be positive"));
    }
    let w = Complex64::new(1.0 / libm::sqrt(dim as f64), 0.0);
    KernelTensor::from_fn(dim, m, n, |a, b| {
        let first = a.first().or(b.first()).copied().unwrap_or(0);
        if a.iter().chain(b).all(|&x| x == first) {
            w
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Diagonal support with i.i.d. complex Gaussian weights, normalized to
/// unit norm.
pub fn gen_random_diagonal(
    m: usize,
    n: usize,
    dim: usize,
    rng: &mut impl RngCore,
) -> Result<KernelTensor> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be positive"));
    }
    let weights: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
    let total: f64 = weights.iter().map(|w| w.norm_sqr()).sum();
    let scale = 1.0 / libm::sqrt(total);
    KernelTensor::from_fn(dim, m, n, |a, b| {
        let first = a.first().or(b.first()).copied().unwrap_or(0);
        if a.iter().chain(b).all(|&x| x == first) {
            weights[first] * scale
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Entries i.i.d. standard complex Gaussian, then symmetrized.
pub fn gen_gaussian(
    m: usize,
    n: usize,
    dim: usize,
    rng: &mut impl RngCore,
) -> Result<KernelTensor> {
    let k = KernelTensor::from_fn(dim, m, n, |_, _| complex_normal(rng))?;
    Ok(k.symmetrize())
}
