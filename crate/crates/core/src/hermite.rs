//! Itô's complex Hermite polynomials `J_{m,n}(z, ρ)`.
//!
//! Evaluation runs the two raising recursions
//!
//! ```text
//! J_{m+1,n} = z·J_{m,n} − n·ρ·J_{m,n−1}
//! J_{m,n+1} = z̄·J_{m,n} − m·ρ·J_{m−1,n}
//! ```
//!
//! from `J_{0,0} = 1`. The closed form
//! `Σ_k (−ρ)^k k! C(m,k) C(n,k) z^{m−k} z̄^{n−k}` is kept as exact integer
//! coefficients and serves as a cross-check.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::combinatorics::{binomial, factorial};
use crate::error::{Error, Result};

/// Bidegree `(m, n)`: degree `m` in `z` and `n` in `z̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HermiteIndex {
    pub m: usize,
    pub n: usize,
}

impl HermiteIndex {
    pub fn new(m: i64, n: i64) -> Result<Self> {
        if m < 0 || n < 0 {
            return Err(Error::Domain("Hermite indices must be nonnegative"));
        }
        Ok(Self {
            m: m as usize,
            n: n as usize,
        })
    }
}

/// Which slot group the recursion raises first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaiseOrder {
    UnbarredFirst,
    BarredFirst,
}

/// `J_{m,n}(z, ρ)` via the recursions, raising `m` first.
pub fn eval(m: usize, n: usize, z: Complex64, rho: f64) -> Complex64 {
    eval_ordered(m, n, z, rho, RaiseOrder::UnbarredFirst)
}

pub fn eval_ordered(m: usize, n: usize, z: Complex64, rho: f64, order: RaiseOrder) -> Complex64 {
    match order {
        RaiseOrder::UnbarredFirst => table(m, n, z, rho)[m][n],
        RaiseOrder::BarredFirst => {
            // J_{0,b} = z̄^b, then J_{a+1,b} = z J_{a,b} − bρ J_{a,b−1}
            let zb = z.conj();
            let mut col: Vec<Complex64> = (0..=n).map(|b| zb.powu(b as u32)).collect();
            for _ in 0..m {
                let prev = col.clone();
                for b in 0..=n {
                    col[b] = z * prev[b];
                    if b > 0 {
                        col[b] -= prev[b - 1] * (b as f64 * rho);
                    }
                }
            }
            col[n]
        }
    }
}

/// Checked entry point: rejects negative indices and non-positive `ρ`.
pub fn hermite_eval(m: i64, n: i64, z: Complex64, rho: f64) -> Result<Complex64> {
    let idx = HermiteIndex::new(m, n)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain("rho must be a positive finite real"));
    }
    Ok(eval(idx.m, idx.n, z, rho))
}

/// Table `t[a][b] = J_{a,b}(z, ρ)` for `a ≤ max_m`, `b ≤ max_n`.
pub fn table(max_m: usize, max_n: usize, z: Complex64, rho: f64) -> Vec<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut t = vec![vec![zero; max_n + 1]; max_m + 1];
    let mut p = Complex64::new(1.0, 0.0);
    for row in t.iter_mut() {
        row[0] = p;
        p *= z;
    }
    let zb = z.conj();
    for b in 0..max_n {
        for a in 0..=max_m {
            let mut v = zb * t[a][b];
            if a > 0 {
                v -= t[a - 1][b] * (a as f64 * rho);
            }
            t[a][b + 1] = v;
        }
    }
    t
}

/// `∂/∂z J_{m,n} = m·J_{m−1,n}`.
pub fn dz(m: usize, n: usize, z: Complex64, rho: f64) -> Complex64 {
    if m == 0 {
        return Complex64::new(0.0, 0.0);
    }
    eval(m - 1, n, z, rho) * m as f64
}

/// `∂/∂z̄ J_{m,n} = n·J_{m,n−1}`.
pub fn dzbar(m: usize, n: usize, z: Complex64, rho: f64) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    eval(m, n - 1, z, rho) * n as f64
}

/// `∂/∂ρ J_{m,n} = −mn·J_{m−1,n−1}`.
pub fn drho(m: usize, n: usize, z: Complex64, rho: f64) -> Complex64 {
    if m == 0 || n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    eval(m - 1, n - 1, z, rho) * -((m * n) as f64)
}

/// One term `coeff · ρ^k · z^(m−k) · z̄^(n−k)` of the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteTerm {
    pub rho_power: usize,
    pub z_power: usize,
    pub zbar_power: usize,
    pub coeff: i64,
}

/// Exact closed-form coefficients of `J_{m,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteCoeffs {
    pub index: HermiteIndex,
    pub terms: Vec<HermiteTerm>,
}

pub fn coeffs(m: usize, n: usize) -> HermiteCoeffs {
    let terms = (0..=m.min(n))
        .map(|k| {
            let mag = factorial(k) * binomial(m, k) * binomial(n, k);
            let mag = i64::try_from(mag).expect("Hermite coefficient overflows i64");
            HermiteTerm {
                rho_power: k,
                z_power: m - k,
                zbar_power: n - k,
                coeff: if k % 2 == 0 { mag } else { -mag },
            }
        })
        .collect();
    HermiteCoeffs {
        index: HermiteIndex { m, n },
        terms,
    }
}

impl HermiteCoeffs {
    /// Coefficient of `ρ^k z^p z̄^q`, zero when absent.
    pub fn coefficient(&self, rho_power: usize, z_power: usize, zbar_power: usize) -> i64 {
        self.terms
            .iter()
            .find(|t| {
                t.rho_power == rho_power && t.z_power == z_power && t.zbar_power == zbar_power
            })
            .map_or(0, |t| t.coeff)
    }

    /// `Σ_k |coeff_k|·ρ^k·|z|^(m+n−2k)`: the magnitude of the largest
    /// partial sums, which bounds the rounding error of any evaluation
    /// route at `ε` times this value.
    pub fn magnitude_scale(&self, z: Complex64, rho: f64) -> f64 {
        let r = z.norm();
        self.terms
            .iter()
            .map(|t| {
                (t.coeff.unsigned_abs() as f64)
                    * libm::pow(rho, t.rho_power as f64)
                    * libm::pow(r, (t.z_power + t.zbar_power) as f64)
            })
            .sum()
    }

    pub fn eval(&self, z: Complex64, rho: f64) -> Complex64 {
        let zb = z.conj();
        self.terms
            .iter()
            .map(|t| {
                z.powu(t.z_power as u32)
                    * zb.powu(t.zbar_power as u32)
                    * (t.coeff as f64 * libm::pow(rho, t.rho_power as f64))
            })
            .sum()
    }
}
