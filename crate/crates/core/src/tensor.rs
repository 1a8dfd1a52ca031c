//! Dense kernels `f ∈ H^⊗m ⊗ H^⊗n` over `H = ℂ^d`.
//!
//! Entries are stored row-major over the multi-index `(α_1..α_m, β_1..β_n)`
//! with the last index varying fastest. Indices are zero-based in code.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A dense complex kernel with `m` unbarred and `n` barred slots.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTensor {
    dim: usize,
    m: usize,
    n: usize,
    entries: Vec<Complex64>,
}

pub(crate) fn checked_len(dim: usize, order: usize) -> Result<usize> {
    let mut len: usize = 1;
    for _ in 0..order {
        len = len
            .checked_mul(dim)
            .ok_or(Error::Domain("kernel size overflows usize"))?;
    }
    Ok(len)
}

fn strides(dim: usize, order: usize) -> Vec<usize> {
    let mut s = vec![1usize; order];
    for p in (0..order.saturating_sub(1)).rev() {
        s[p] = s[p + 1] * dim;
    }
    s
}

fn decode(mut flat: usize, dim: usize, digits: &mut [usize]) {
    for slot in digits.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
}

fn encode(dim: usize, digits: &[usize]) -> usize {
    digits.iter().fold(0, |acc, &x| acc * dim + x)
}

/// Enumerate every digit combination over `pairs.len()` positions in
/// row-major order, yielding the paired offsets `Σ digit·sa` and `Σ digit·sb`.
fn paired_offsets(dim: usize, pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = vec![(0usize, 0usize)];
    for &(sa, sb) in pairs {
        let mut next = Vec::with_capacity(out.len() * dim);
        for &(a, b) in &out {
            for x in 0..dim {
                next.push((a + x * sa, b + x * sb));
            }
        }
        out = next;
    }
    out
}

impl KernelTensor {
    /// Validating constructor. No symmetrization is applied.
    pub fn new(dim: usize, m: usize, n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("dimension must be positive"));
        }
        let expected = checked_len(dim, m + n)?;
        if entries.len() != expected {
            return Err(Error::ShapeLength {
                expected,
                found: entries.len(),
            });
        }
        if let Some(index) = entries
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { dim, m, n, entries })
    }

    pub fn zeros(dim: usize, m: usize, n: usize) -> Result<Self> {
        let len = checked_len(dim, m + n)?;
        Self::new(dim, m, n, vec![Complex64::new(0.0, 0.0); len])
    }

    /// Order-zero kernel holding a single constant.
    pub fn scalar(dim: usize, value: Complex64) -> Result<Self> {
        Self::new(dim, 0, 0, vec![value])
    }

    /// Builds a kernel from a function of `(α, β)`.
    pub fn from_fn<F>(dim: usize, m: usize, n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize], &[usize]) -> Complex64,
    {
        let len = checked_len(dim, m + n)?;
        let mut digits = vec![0usize; m + n];
        let mut entries = Vec::with_capacity(len);
        for flat in 0..len {
            decode(flat, dim, &mut digits);
            entries.push(f(&digits[..m], &digits[m..]));
        }
        Self::new(dim, m, n, entries)
    }

    /// `e_{α} ⊗ ē_{β}` with zero-based basis labels.
    pub fn basis(dim: usize, alpha: &[usize], beta: &[usize]) -> Result<Self> {
        if alpha.iter().chain(beta).any(|&x| x >= dim) {
            return Err(Error::Domain("basis label exceeds dimension"));
        }
        let mut k = Self::zeros(dim, alpha.len(), beta.len())?;
        let mut digits = Vec::with_capacity(alpha.len() + beta.len());
        digits.extend_from_slice(alpha);
        digits.extend_from_slice(beta);
        k.entries[encode(dim, &digits)] = Complex64::new(1.0, 0.0);
        Ok(k)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `l = m + n`.
    pub fn order(&self) -> usize {
        self.m + self.n
    }

    /// `l' = 2·min(m, n)`.
    pub fn paired_order(&self) -> usize {
        2 * self.m.min(self.n)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn get(&self, alpha: &[usize], beta: &[usize]) -> Option<Complex64> {
        if alpha.len() != self.m || beta.len() != self.n {
            return None;
        }
        if alpha.iter().chain(beta).any(|&x| x >= self.dim) {
            return None;
        }
        let flat = alpha
            .iter()
            .chain(beta)
            .fold(0, |acc, &x| acc * self.dim + x);
        Some(self.entries[flat])
    }

    /// Visits every entry with its decoded `(α, β)` multi-index.
    pub fn for_each_indexed<F>(&self, mut f: F)
    where
        F: FnMut(&[usize], &[usize], Complex64),
    {
        let mut digits = vec![0usize; self.order()];
        for (flat, &v) in self.entries.iter().enumerate() {
            decode(flat, self.dim, &mut digits);
            f(&digits[..self.m], &digits[self.m..], v);
        }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.dim == other.dim && self.m == other.m && self.n == other.n
    }

    fn shape_check(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                left: (self.dim, self.m, self.n),
                right: (other.dim, other.m, other.n),
            })
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            m: self.m,
            n: self.n,
            entries: self.entries.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, other: &Self, c: Complex64) -> Result<()> {
        self.shape_check(other)?;
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b * c;
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Averages over all permutations acting separately on the unbarred
    /// and the barred slot groups.
    ///
    /// Every orbit of the group action is hit uniformly by the permutation
    /// sum, so the average equals the mean of the entries sharing the same
    /// sorted index multiset per group.
    pub fn symmetrize(&self) -> Self {
        if self.m <= 1 && self.n <= 1 {
            return self.clone();
        }
        let len = self.entries.len();
        let mut canon = Vec::with_capacity(len);
        let mut digits = vec![0usize; self.order()];
        for flat in 0..len {
            decode(flat, self.dim, &mut digits);
            digits[..self.m].sort_unstable();
            digits[self.m..].sort_unstable();
            canon.push(encode(self.dim, &digits));
        }
        let mut sums = vec![Complex64::new(0.0, 0.0); len];
        let mut counts = vec![0u32; len];
        for (flat, &c) in canon.iter().enumerate() {
            sums[c] += self.entries[flat];
            counts[c] += 1;
        }
        let entries = canon
            .iter()
            .map(|&c| sums[c] / f64::from(counts[c]))
            .collect();
        Self {
            dim: self.dim,
            m: self.m,
            n: self.n,
            entries,
        }
    }

    /// Kernel of the conjugated integral: `H[β; α] = conj(K[α; β])`.
    pub fn conj_flip(&self) -> Self {
        let len = self.entries.len();
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        let mut digits = vec![0usize; self.order()];
        let mut swapped = vec![0usize; self.order()];
        for (flat, &v) in self.entries.iter().enumerate() {
            decode(flat, self.dim, &mut digits);
            swapped[..self.n].copy_from_slice(&digits[self.m..]);
            swapped[self.n..].copy_from_slice(&digits[..self.m]);
            out[encode(self.dim, &swapped)] = v.conj();
        }
        Self {
            dim: self.dim,
            m: self.n,
            n: self.m,
            entries: out,
        }
    }

    /// Contraction `A ⊗_{i,j} B` by plain Einstein summation.
    ///
    /// The last `i` unbarred slots of `A` pair with the last `i` barred
    /// slots of `B`; the last `j` barred slots of `A` pair with the last `j`
    /// unbarred slots of `B`. The result carries unbarred slots
    /// `(A free, B free)` and barred slots `(A free, B free)`.
    pub fn contract(&self, other: &Self, i: usize, j: usize) -> Result<Self> {
        let (a, b) = (self, other);
        if a.dim != b.dim {
            return Err(Error::DimensionMismatch {
                left: a.dim,
                right: b.dim,
            });
        }
        let max_i = a.m.min(b.n);
        let max_j = a.n.min(b.m);
        if i > max_i || j > max_j {
            return Err(Error::ContractionArity { i, j, max_i, max_j });
        }
        let dim = a.dim;
        let sa = strides(dim, a.order());
        let sb = strides(dim, b.order());
        // slot positions inside A and B
        let a_u = |p: usize| sa[p];
        let a_b = |p: usize| sa[a.m + p];
        let b_u = |p: usize| sb[p];
        let b_b = |p: usize| sb[b.m + p];

        let mut free = Vec::new();
        free.extend((0..a.m - i).map(|p| (a_u(p), 0)));
        free.extend((0..b.m - j).map(|p| (0, b_u(p))));
        free.extend((0..a.n - j).map(|p| (a_b(p), 0)));
        free.extend((0..b.n - i).map(|p| (0, b_b(p))));

        let mut summed = Vec::new();
        summed.extend((0..i).map(|t| (a_u(a.m - i + t), b_b(b.n - i + t))));
        summed.extend((0..j).map(|t| (a_b(a.n - j + t), b_u(b.m - j + t))));

        let free_offsets = paired_offsets(dim, &free);
        let sum_offsets = paired_offsets(dim, &summed);
        let entries = free_offsets
            .iter()
            .map(|&(fa, fb)| {
                sum_offsets
                    .iter()
                    .map(|&(ka, kb)| a.entries[fa + ka] * b.entries[fb + kb])
                    .sum()
            })
            .collect();
        Ok(Self {
            dim,
            m: a.m + b.m - i - j,
            n: a.n + b.n - i - j,
            entries,
        })
    }

    /// Fixes the last unbarred slot to basis label `k`, giving shape `(m−1, n)`.
    pub fn slice_last_unbarred(&self, k: usize) -> Result<Self> {
        if self.m == 0 || k >= self.dim {
            return Err(Error::Domain("no unbarred slot to fix"));
        }
        let (m, n) = (self.m, self.n);
        Self::from_fn(self.dim, m - 1, n, |a, b| {
            let flat = a
                .iter()
                .chain(core::iter::once(&k))
                .chain(b)
                .fold(0, |acc, &x| acc * self.dim + x);
            self.entries[flat]
        })
    }

    /// Fixes the last barred slot to basis label `k`, giving shape `(m, n−1)`.
    pub fn slice_last_barred(&self, k: usize) -> Result<Self> {
        if self.n == 0 || k >= self.dim {
            return Err(Error::Domain("no barred slot to fix"));
        }
        let (m, n) = (self.m, self.n);
        Self::from_fn(self.dim, m, n - 1, |a, b| {
            let flat = a
                .iter()
                .chain(b)
                .chain(core::iter::once(&k))
                .fold(0, |acc, &x| acc * self.dim + x);
            self.entries[flat]
        })
    }

    /// `symmetrize(contract(A, B, i, j))`.
    pub fn sym_contract(&self, other: &Self, i: usize, j: usize) -> Result<Self> {
        Ok(self.contract(other, i, j)?.symmetrize())
    }

    /// `Σ A[idx]·conj(B[idx])`, conjugate-linear in the second argument.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.shape_check(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&x, &y)| x * y.conj())
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }
}
