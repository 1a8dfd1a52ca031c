//! Standard complex Gaussian draws.
//!
//! `Z = (X + iY)/√2` with `X`, `Y` independent standard normals, so
//! `E|Z|² = 1` and `E Z² = 0`. The normal pair comes from the Marsaglia
//! polar transform, which yields exactly the two normals needed per draw.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_core::RngCore;

use crate::chaos::GaussianSample;

fn uniform_open(rng: &mut impl RngCore) -> f64 {
    // 53 random mantissa bits mapped to [-1, 1)
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    2.0 * u - 1.0
}

/// One standard complex normal.
pub fn complex_normal(rng: &mut impl RngCore) -> Complex64 {
    loop {
        let u = uniform_open(rng);
        let v = uniform_open(rng);
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            // sqrt(-2 ln s / s) / sqrt(2)
            let factor = libm::sqrt(-libm::log(s) / s);
            return Complex64::new(u * factor, v * factor);
        }
    }
}

/// `d` independent standard complex normals.
pub fn sample_gaussian(dim: usize, rng: &mut impl RngCore) -> GaussianSample {
    let values: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
    GaussianSample::new(values).expect("polar transform yields finite values")
}
