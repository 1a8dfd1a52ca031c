#![allow(dead_code)]

use chaosforge_core::families::gen_gaussian;
use chaosforge_core::sampling::sample_gaussian;
use chaosforge_core::{ChaosElement, Complex64, GaussianSample, KernelTensor};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_kernel(m: usize, n: usize, dim: usize, rng: &mut ChaCha8Rng) -> KernelTensor {
    gen_gaussian(m, n, dim, rng).unwrap()
}

/// Random kernel without symmetrization.
pub fn raw_kernel(m: usize, n: usize, dim: usize, rng: &mut ChaCha8Rng) -> KernelTensor {
    KernelTensor::from_fn(dim, m, n, |_, _| {
        chaosforge_core::sampling::complex_normal(rng)
    })
    .unwrap()
}

pub fn random_element(grades: &[(usize, usize)], dim: usize, rng: &mut ChaCha8Rng) -> ChaosElement {
    let mut f = ChaosElement::zero(dim);
    for &(m, n) in grades {
        let k = random_kernel(m, n, dim, rng);
        f.add_kernel(&k, Complex64::new(1.0, 0.0)).unwrap();
    }
    f
}

pub fn sample(dim: usize, rng: &mut ChaCha8Rng) -> GaussianSample {
    sample_gaussian(dim, rng)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

pub fn crel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
