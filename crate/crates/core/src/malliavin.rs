//! Complex Malliavin derivatives and Ornstein-Uhlenbeck operators, acting
//! spectrally on chaos decompositions:
//!
//! ```text
//! D I_{m,n}(f) = m·I_{m−1,n}(f(·, k; ·)),   D̄ I_{m,n}(f) = n·I_{m,n−1}(f(·; ·, k)),
//! L I_{m,n}(f) = m·I_{m,n}(f),             L̄ I_{m,n}(f) = n·I_{m,n}(f).
//! ```
//!
//! In coordinates, component `k` of `DF` is the Wirtinger derivative
//! `∂F/∂z_k` and component `k` of `D̄F` is `∂F/∂z̄_k`. `D̄F` carries the
//! conjugated basis vectors `ē_k`; here both are stored as plain
//! `d`-component arrays and the distinction only matters through
//! [`h_inner`].

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::chaos::{ChaosElement, GaussianSample};
use crate::error::{Error, Result};

/// Central-difference step for [`wirtinger_fd`].
pub const FD_STEP: f64 = 1e-5;

/// An `H`-valued chaos variable `Σ_k components[k]·e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorChaos {
    dim: usize,
    components: Vec<ChaosElement>,
}

impl VectorChaos {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            components: (0..dim).map(|_| ChaosElement::zero(dim)).collect(),
        }
    }

    pub fn new(components: Vec<ChaosElement>) -> Result<Self> {
        let dim = components.len();
        if let Some(bad) = components.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.dim(),
            });
        }
        Ok(Self { dim, components })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[ChaosElement] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &ChaosElement {
        &self.components[k]
    }

    pub fn evaluate(&self, sample: &GaussianSample) -> Result<Vec<Complex64>> {
        self.components.iter().map(|c| c.evaluate(sample)).collect()
    }

    /// Componentwise conjugation.
    pub fn conjugate(&self) -> Self {
        Self {
            dim: self.dim,
            components: self
                .components
                .iter()
                .map(ChaosElement::conjugate)
                .collect(),
        }
    }

    /// Pointwise product with a scalar chaos variable.
    pub fn times(&self, g: &ChaosElement) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| c.multiply(g))
            .collect::<Result<_>>()?;
        Ok(Self {
            dim: self.dim,
            components,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Self {
            dim: self.dim,
            components,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            components: self.components.iter().map(|x| x.scale(c)).collect(),
        }
    }
}

/// `DF`.
pub fn mall_d(f: &ChaosElement) -> VectorChaos {
    let dim = f.dim();
    let mut out = VectorChaos::zero(dim);
    for (grade, kernel) in f.components() {
        if grade.m == 0 {
            continue;
        }
        let weight = Complex64::new(grade.m as f64, 0.0);
        for (k, comp) in out.components.iter_mut().enumerate() {
            let slice = kernel
                .slice_last_unbarred(k)
                .expect("grade has an unbarred slot");
            comp.add_kernel(&slice, weight)
                .expect("dimension matches by construction");
        }
    }
    out
}

/// `D̄F`.
pub fn mall_dbar(f: &ChaosElement) -> VectorChaos {
    let dim = f.dim();
    let mut out = VectorChaos::zero(dim);
    for (grade, kernel) in f.components() {
        if grade.n == 0 {
            continue;
        }
        let weight = Complex64::new(grade.n as f64, 0.0);
        for (k, comp) in out.components.iter_mut().enumerate() {
            let slice = kernel
                .slice_last_barred(k)
                .expect("grade has a barred slot");
            comp.add_kernel(&slice, weight)
                .expect("dimension matches by construction");
        }
    }
    out
}

fn eigen_scale(f: &ChaosElement, eigen: impl Fn(usize, usize) -> usize) -> ChaosElement {
    let mut out = ChaosElement::zero(f.dim());
    for (grade, kernel) in f.components() {
        let lambda = eigen(grade.m, grade.n);
        if lambda != 0 {
            out.add_kernel(kernel, Complex64::new(lambda as f64, 0.0))
                .expect("dimension matches by construction");
        }
    }
    out
}

/// `L = δD`: multiplies grade `(m,n)` by `m`.
pub fn ou_l(f: &ChaosElement) -> ChaosElement {
    eigen_scale(f, |m, _| m)
}

/// `L̄ = δ̄D̄`: multiplies grade `(m,n)` by `n`.
pub fn ou_lbar(f: &ChaosElement) -> ChaosElement {
    eigen_scale(f, |_, n| n)
}

/// Pointwise `⟨u, v⟩_H = Σ_k u_k·conj(v_k)`.
pub fn h_inner(u: &VectorChaos, v: &VectorChaos) -> Result<ChaosElement> {
    if u.dim != v.dim {
        return Err(Error::DimensionMismatch {
            left: u.dim,
            right: v.dim,
        });
    }
    let mut out = ChaosElement::zero(u.dim);
    for (a, b) in u.components.iter().zip(&v.components) {
        let p = a.multiply(&b.conjugate())?;
        out.add_assign_scaled(&p, Complex64::new(1.0, 0.0))?;
    }
    Ok(out)
}

/// Numerical Wirtinger pair `(∂F/∂z_k, ∂F/∂z̄_k)` at `s` by central
/// differences along the real and imaginary directions.
pub fn wirtinger_fd(
    f: &ChaosElement,
    s: &GaussianSample,
    k: usize,
) -> Result<(Complex64, Complex64)> {
    if k >= s.dim() {
        return Err(Error::Domain("coordinate index out of range"));
    }
    let h = FD_STEP;
    let re = Complex64::new(h, 0.0);
    let im = Complex64::new(0.0, h);
    let dx = (f.evaluate(&s.perturbed(k, re))? - f.evaluate(&s.perturbed(k, -re))?) / (2.0 * h);
    let dy = (f.evaluate(&s.perturbed(k, im))? - f.evaluate(&s.perturbed(k, -im))?) / (2.0 * h);
    let i = Complex64::new(0.0, 1.0);
    Ok(((dx - i * dy) * 0.5, (dx + i * dy) * 0.5))
}
