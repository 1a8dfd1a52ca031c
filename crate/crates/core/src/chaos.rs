//! Finite chaos decompositions `F = c + Σ_{(m,n)} I_{m,n}(f_{m,n})`.
//!
//! With `Z_1..Z_d` the coordinates of the isonormal process on an
//! orthonormal basis, `I_{m,n}(e_α ⊗ ē_β)` factorizes over coordinates as
//! `∏_c J_{a_c, b_c}(Z_c, 1)`, where `a_c`, `b_c` count the occurrences of
//! `c` in `α`, `β`. Evaluation and the monomial oracle both rest on this.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::combinatorics::{binomial_f64, factorial_f64};
use crate::error::{Error, Result};
use crate::hermite;
use crate::tensor::KernelTensor;

/// Chaos grade `(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grade {
    pub m: usize,
    pub n: usize,
}

impl Grade {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }
}

/// One draw of `d` independent standard complex Gaussians.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSample {
    values: Vec<Complex64>,
}

impl GaussianSample {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("sample dimension must be positive"));
        }
        if let Some(index) = values
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Copy with coordinate `k` shifted by `delta`.
    pub fn perturbed(&self, k: usize, delta: Complex64) -> Self {
        let mut values = self.values.clone();
        values[k] += delta;
        Self { values }
    }
}

/// A finite linear combination of multiple integrals.
///
/// Kernels are stored symmetrized; the grade `(0,0)` part is the constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosElement {
    dim: usize,
    constant: Complex64,
    grades: BTreeMap<Grade, KernelTensor>,
}

fn dim_check(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a, right: b })
    }
}

impl ChaosElement {
    pub fn zero(dim: usize) -> Self {
        Self::constant(dim, Complex64::new(0.0, 0.0))
    }

    pub fn constant(dim: usize, value: Complex64) -> Self {
        Self {
            dim,
            constant: value,
            grades: BTreeMap::new(),
        }
    }

    /// The multiple integral `I_{m,n}(f)`.
    pub fn integral(f: &KernelTensor) -> Self {
        let mut out = Self::zero(f.dim());
        out.add_kernel(f, Complex64::new(1.0, 0.0))
            .expect("dimension matches by construction");
        out
    }

    /// Adds `c·I_{m,n}(f)`; order-zero kernels feed the constant.
    pub fn add_kernel(&mut self, f: &KernelTensor, c: Complex64) -> Result<()> {
        dim_check(self.dim, f.dim())?;
        if f.order() == 0 {
            self.constant += f.entries()[0] * c;
            return Ok(());
        }
        if c.re == 0.0 && c.im == 0.0 {
            return Ok(());
        }
        let sym = f.symmetrize();
        let grade = Grade::new(f.m(), f.n());
        match self.grades.get_mut(&grade) {
            Some(k) => k.add_scaled(&sym, c)?,
            None if sym.is_zero() => {}
            None => {
                self.grades.insert(grade, sym.scale(c));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant_term(&self) -> Complex64 {
        self.constant
    }

    pub fn kernel(&self, grade: Grade) -> Option<&KernelTensor> {
        self.grades.get(&grade)
    }

    /// Non-constant components in grade order.
    pub fn components(&self) -> impl Iterator<Item = (Grade, &KernelTensor)> {
        self.grades.iter().map(|(g, k)| (*g, k))
    }

    /// Highest total degree `m + n` carrying a nonzero kernel.
    pub fn degree(&self) -> usize {
        self.grades
            .iter()
            .filter(|(_, k)| !k.is_zero())
            .map(|(g, _)| g.m + g.n)
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c.re == 0.0 && c.im == 0.0 {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            constant: self.constant * c,
            grades: self.grades.iter().map(|(g, k)| (*g, k.scale(c))).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_assign_scaled(other, Complex64::new(1.0, 0.0))?;
        Ok(out)
    }

    pub fn add_assign_scaled(&mut self, other: &Self, c: Complex64) -> Result<()> {
        dim_check(self.dim, other.dim)?;
        self.constant += other.constant * c;
        for k in other.grades.values() {
            self.add_kernel(k, c)?;
        }
        Ok(())
    }

    /// Applies `conj_flip` gradewise, so that the result is the pointwise
    /// complex conjugate.
    pub fn conjugate(&self) -> Self {
        Self {
            dim: self.dim,
            constant: self.constant.conj(),
            grades: self
                .grades
                .values()
                .map(|k| (Grade::new(k.n(), k.m()), k.conj_flip()))
                .collect(),
        }
    }

    /// Pointwise value at one Gaussian draw.
    pub fn evaluate(&self, sample: &GaussianSample) -> Result<Complex64> {
        dim_check(self.dim, sample.dim())?;
        let max_m = self.grades.keys().map(|g| g.m).max().unwrap_or(0);
        let max_n = self.grades.keys().map(|g| g.n).max().unwrap_or(0);
        let tables: Vec<_> = sample
            .values()
            .iter()
            .map(|&z| hermite::table(max_m, max_n, z, 1.0))
            .collect();
        let mut total = self.constant;
        let mut a = vec![0usize; self.dim];
        let mut b = vec![0usize; self.dim];
        for kernel in self.grades.values() {
            kernel.for_each_indexed(|alpha, beta, v| {
                if v.re == 0.0 && v.im == 0.0 {
                    return;
                }
                a.iter_mut().for_each(|x| *x = 0);
                b.iter_mut().for_each(|x| *x = 0);
                alpha.iter().for_each(|&x| a[x] += 1);
                beta.iter().for_each(|&x| b[x] += 1);
                let mut prod = v;
                for (c, t) in tables.iter().enumerate() {
                    if a[c] != 0 || b[c] != 0 {
                        prod *= t[a[c]][b[c]];
                    }
                }
                total += prod;
            });
        }
        Ok(total)
    }

    /// Product formula:
    /// `I_{m,n}(f)·I_{p,q}(g) = Σ_{i≤m∧q} Σ_{j≤n∧p} C(m,i)C(q,i)C(n,j)C(p,j)·i!·j!·I(f ⊗_{i,j} g)`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        dim_check(self.dim, other.dim)?;
        let mut out = Self::constant(self.dim, self.constant * other.constant);
        for g in other.grades.values() {
            out.add_kernel(g, self.constant)?;
        }
        for f in self.grades.values() {
            out.add_kernel(f, other.constant)?;
        }
        for f in self.grades.values() {
            for g in other.grades.values() {
                let (m, n, p, q) = (f.m(), f.n(), g.m(), g.n());
                for i in 0..=m.min(q) {
                    for j in 0..=n.min(p) {
                        let coeff = binomial_f64(m, i)
                            * binomial_f64(q, i)
                            * binomial_f64(n, j)
                            * binomial_f64(p, j)
                            * factorial_f64(i)
                            * factorial_f64(j);
                        let k = f.contract(g, i, j)?;
                        out.add_kernel(&k, Complex64::new(coeff, 0.0))?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `E[F · conj(G)]` through the isometry `m!·n!·⟨f, g⟩` on common grades.
    pub fn l2_inner(&self, other: &Self) -> Result<Complex64> {
        dim_check(self.dim, other.dim)?;
        let mut acc = self.constant * other.constant.conj();
        for (g, f) in &self.grades {
            if let Some(h) = other.grades.get(g) {
                acc += f.inner(h)? * (factorial_f64(g.m) * factorial_f64(g.n));
            }
        }
        Ok(acc)
    }

    /// `E[|F|²]`.
    pub fn l2_norm_sqr(&self) -> f64 {
        self.l2_inner(self).map(|z| z.re).unwrap_or(0.0)
    }

    /// `E[F]`, the constant term.
    pub fn mean(&self) -> Complex64 {
        self.constant
    }
}
