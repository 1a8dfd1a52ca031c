//! The fourth-moment gap `E|F|⁴ − 2(E|F|²)² − |E F²|²` of `F = I_{m,n}(f)`
//! and its expansions in symmetrized contractions.
//!
//! With `h` the conjugate-flip kernel of `f` and `l = m + n`,
//! `l' = 2·min(m, n)`:
//!
//! ```text
//! ψ_r = Σ_{i+j=r} C(m,i)² C(n,j)² i! j! · f ⊗̃_{i,j} h              (i ≤ m, j ≤ n)
//! ϑ_r = Σ_{i+j=r} (i/m) C(m,i)² C(n,j)² i! j! · f ⊗̃_{i,j} h
//! φ_r = Σ_{i+j=r} C(m,i) C(n,i) C(n,j) C(m,j) i! j! · f ⊗̃_{i,j} f  (i, j ≤ min(m,n))
//! ς_r = Σ_{i+j=r} (i/m) C(m,i) C(n,i) C(n,j) C(m,j) i! j! · f ⊗̃_{i,j} f
//!
//! gap = 2 Σ_{r=1}^{l−1} ((l−r)!)² ⟨ϑ_r, ψ_r⟩ + Σ_{r=1}^{R} (2m−r)! (2n−r)! ⟨ς_r, φ_r⟩
//! ```
//!
//! where `R = l' − 1` when `m = n` and `R = l'` otherwise: for `m ≠ n` the
//! top component of `F²` is not a constant and stays in the sum.
//!
//! Every kernel entering this module is symmetrized first.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::chaos::ChaosElement;
use crate::combinatorics::{binomial_f64, factorial_f64};
use crate::error::{Error, Result};
use crate::malliavin::{h_inner, mall_d};
use crate::tensor::KernelTensor;
use crate::wick::exact_moment;

trait Squared {
    fn squared(self) -> Self;
}

impl Squared for f64 {
    fn squared(self) -> f64 {
        self * self
    }
}

/// Relative bound on imaginary parts of quantities that must be real.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

fn real_part(z: Complex64) -> Result<f64> {
    let scale = z.re.abs().max(1.0);
    if z.im.abs() > IMAG_RESIDUE_TOL * scale {
        return Err(Error::Domain("imaginary residue exceeds tolerance"));
    }
    Ok(z.re)
}

/// Largest `r` for which `ς_r`, `φ_r` enter the gap expansion.
pub fn paired_top(m: usize, n: usize) -> usize {
    let lp = 2 * m.min(n);
    if m == n {
        lp.saturating_sub(1)
    } else {
        lp
    }
}

fn weighted_sum<I>(terms: I, dim: usize, m: usize, n: usize) -> Result<KernelTensor>
where
    I: IntoIterator<Item = Result<(f64, KernelTensor)>>,
{
    let mut acc = KernelTensor::zeros(dim, m, n)?;
    for term in terms {
        let (w, k) = term?;
        if w != 0.0 {
            acc.add_scaled(&k, Complex64::new(w, 0.0))?;
        }
    }
    Ok(acc)
}

fn fh_terms(
    f: &KernelTensor,
    h: &KernelTensor,
    r: usize,
    with_ratio: bool,
) -> Result<KernelTensor> {
    let (m, n) = (f.m(), f.n());
    if h.m() != n || h.n() != m || h.dim() != f.dim() {
        return Err(Error::ShapeMismatch {
            left: (f.dim(), n, m),
            right: (h.dim(), h.m(), h.n()),
        });
    }
    let l = m + n;
    if r == 0 || r >= l {
        return Err(Error::Domain("r must satisfy 1 ≤ r ≤ l−1"));
    }
    if with_ratio && m == 0 {
        return Err(Error::Domain("the i/m weight is undefined for m = 0"));
    }
    let terms = (0..=r.min(m)).filter(|&i| r - i <= n).map(|i| {
        let j = r - i;
        let mut w = binomial_f64(m, i).squared()
            * binomial_f64(n, j).squared()
            * factorial_f64(i)
            * factorial_f64(j);
        if with_ratio {
            w *= i as f64 / m as f64;
        }
        Ok((w, f.sym_contract(h, i, j)?))
    });
    weighted_sum(terms, f.dim(), l - r, l - r)
}

fn ff_terms(f: &KernelTensor, r: usize, with_ratio: bool) -> Result<KernelTensor> {
    let (m, n) = (f.m(), f.n());
    let k = m.min(n);
    if r == 0 || r > paired_top(m, n) {
        return Err(Error::Domain("r outside the paired contraction range"));
    }
    if with_ratio && m == 0 {
        return Err(Error::Domain("the i/m weight is undefined for m = 0"));
    }
    let terms = (0..=r.min(k)).filter(|&i| r - i <= k).map(|i| {
        let j = r - i;
        let mut w = binomial_f64(m, i)
            * binomial_f64(n, i)
            * binomial_f64(n, j)
            * binomial_f64(m, j)
            * factorial_f64(i)
            * factorial_f64(j);
        if with_ratio {
            w *= i as f64 / m as f64;
        }
        Ok((w, f.sym_contract(f, i, j)?))
    });
    weighted_sum(terms, f.dim(), 2 * m - r, 2 * n - r)
}

/// `ψ_r`, shape `(l−r, l−r)`.
pub fn build_psi(f: &KernelTensor, h: &KernelTensor, r: usize) -> Result<KernelTensor> {
    fh_terms(f, h, r, false)
}

/// `ϑ_r`, shape `(l−r, l−r)`.
pub fn build_theta(f: &KernelTensor, h: &KernelTensor, r: usize) -> Result<KernelTensor> {
    fh_terms(f, h, r, true)
}

/// `ς_r`, shape `(2m−r, 2n−r)`.
pub fn build_varsigma(f: &KernelTensor, r: usize) -> Result<KernelTensor> {
    ff_terms(f, r, true)
}

/// `φ_r`, shape `(2m−r, 2n−r)`.
pub fn build_varphi(f: &KernelTensor, r: usize) -> Result<KernelTensor> {
    ff_terms(f, r, false)
}

/// The three moments entering the gap, computed by the Wick oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactMoments {
    pub abs2: f64,
    pub abs4: f64,
    pub square: Complex64,
}

impl ExactMoments {
    pub fn gap(&self) -> f64 {
        self.abs4 - 2.0 * self.abs2 * self.abs2 - self.square.norm_sqr()
    }
}

pub fn exact_moments(f: &KernelTensor) -> Result<ExactMoments> {
    let big_f = ChaosElement::integral(f);
    let abs2 = exact_moment(&[(&big_f, false), (&big_f, true)])?;
    let abs4 = exact_moment(&[
        (&big_f, false),
        (&big_f, true),
        (&big_f, false),
        (&big_f, true),
    ])?;
    let square = exact_moment(&[(&big_f, false), (&big_f, false)])?;
    Ok(ExactMoments {
        abs2: real_part(abs2)?,
        abs4: real_part(abs4)?,
        square,
    })
}

/// Gap from first principles via exact Gaussian moments.
pub fn gap_exact(f: &KernelTensor) -> Result<f64> {
    Ok(exact_moments(f)?.gap())
}

/// Gap from the weighted inner products `⟨ϑ_r, ψ_r⟩` and `⟨ς_r, φ_r⟩`.
///
/// For `m = 0` the gap is evaluated on the conjugate-flip kernel, which
/// leaves it unchanged.
pub fn gap_contractions(f: &KernelTensor) -> Result<f64> {
    if f.order() == 0 {
        return Err(Error::Domain("gap expansion needs m + n ≥ 1"));
    }
    let f = if f.m() == 0 {
        f.conj_flip().symmetrize()
    } else {
        f.symmetrize()
    };
    let h = f.conj_flip();
    let (m, n) = (f.m(), f.n());
    let l = m + n;
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 1..l {
        let theta = build_theta(&f, &h, r)?;
        let psi = build_psi(&f, &h, r)?;
        acc += theta.inner(&psi)? * (2.0 * factorial_f64(l - r).squared());
    }
    for r in 1..=paired_top(m, n) {
        let varsigma = build_varsigma(&f, r)?;
        let varphi = build_varphi(&f, r)?;
        acc += varsigma.inner(&varphi)? * (factorial_f64(2 * m - r) * factorial_f64(2 * n - r));
    }
    real_part(acc)
}

/// Weight of `‖f ⊗_{i,j} f‖²` in the first expansion (`i, j ≤ min(m,n)`).
pub fn ff_norm_weight(m: usize, n: usize, i: usize, j: usize) -> f64 {
    binomial_f64(m, i)
        * binomial_f64(n, i)
        * binomial_f64(n, j)
        * binomial_f64(m, j)
        * (factorial_f64(m) * factorial_f64(n)).squared()
}

/// Weight of `‖f ⊗_{i,j} h‖²` in the second expansion (`i ≤ m`, `j ≤ n`).
pub fn fh_norm_weight(m: usize, n: usize, i: usize, j: usize) -> f64 {
    binomial_f64(m, i).squared()
        * binomial_f64(n, j).squared()
        * (factorial_f64(m) * factorial_f64(n)).squared()
}

/// Gap as plain contraction norms `‖f ⊗_{i,j} f‖²` over `0 < i+j < l`
/// (`i, j ≤ min(m,n)`) plus `Σ_{r=1}^{l−1} ((l−r)!)² ‖ψ_r‖²`.
pub fn gap_expansion_ff(f: &KernelTensor) -> Result<f64> {
    let f = f.symmetrize();
    let h = f.conj_flip();
    let (m, n) = (f.m(), f.n());
    let l = m + n;
    let k = m.min(n);
    let mut acc = 0.0;
    for i in 0..=k {
        for j in 0..=k {
            if i + j == 0 || i + j >= l {
                continue;
            }
            acc += ff_norm_weight(m, n, i, j) * f.contract(&f, i, j)?.norm_sqr();
        }
    }
    for r in 1..l {
        acc += factorial_f64(l - r).squared() * build_psi(&f, &h, r)?.norm_sqr();
    }
    Ok(acc)
}

/// Gap as plain contraction norms `‖f ⊗_{i,j} h‖²` over `0 < i+j < l`
/// (`i ≤ m`, `j ≤ n`) plus `Σ_r (2m−r)!(2n−r)! ‖φ_r‖²` over the paired range.
pub fn gap_expansion_fh(f: &KernelTensor) -> Result<f64> {
    let f = f.symmetrize();
    let h = f.conj_flip();
    let (m, n) = (f.m(), f.n());
    let l = m + n;
    let mut acc = 0.0;
    for i in 0..=m {
        for j in 0..=n {
            if i + j == 0 || i + j >= l {
                continue;
            }
            acc += fh_norm_weight(m, n, i, j) * f.contract(&h, i, j)?.norm_sqr();
        }
    }
    for r in 1..=paired_top(m, n) {
        acc +=
            factorial_f64(2 * m - r) * factorial_f64(2 * n - r) * build_varphi(&f, r)?.norm_sqr();
    }
    Ok(acc)
}

/// Both sides of `(1/m)·E[|F|²·‖DF‖²] = (E|F|²)² + Σ_{r=1}^{l−1} ((l−r)!)²·⟨ϑ_r, ψ_r⟩`.
pub fn derivative_norm_identity(f: &KernelTensor) -> Result<(f64, f64)> {
    let f = f.symmetrize();
    let (m, n) = (f.m(), f.n());
    if m == 0 {
        return Err(Error::Domain("the 1/m weight is undefined for m = 0"));
    }
    let big_f = ChaosElement::integral(&f);
    let df = mall_d(&big_f);
    let abs2 = big_f.multiply(&big_f.conjugate())?;
    let dnorm = h_inner(&df, &df)?;
    let lhs = real_part(exact_moment(&[(&abs2, false), (&dnorm, false)])?)? / m as f64;

    let h = f.conj_flip();
    let l = m + n;
    let e_abs2 = big_f.l2_norm_sqr();
    let mut rhs = Complex64::new(e_abs2 * e_abs2, 0.0);
    for r in 1..l {
        rhs +=
            build_theta(&f, &h, r)?.inner(&build_psi(&f, &h, r)?)? * factorial_f64(l - r).squared();
    }
    Ok((lhs, real_part(rhs)?))
}

/// Both sides of `(1/m)·E[⟨DF, DF̄⟩·F̄²] = |E F²|² + Σ_r (2m−r)!(2n−r)!·⟨ς_r, φ_r⟩`.
pub fn derivative_pairing_identity(f: &KernelTensor) -> Result<(f64, f64)> {
    let f = f.symmetrize();
    let (m, n) = (f.m(), f.n());
    if m == 0 {
        return Err(Error::Domain("the 1/m weight is undefined for m = 0"));
    }
    let big_f = ChaosElement::integral(&f);
    let conj_f = big_f.conjugate();
    let pairing = h_inner(&mall_d(&big_f), &mall_d(&conj_f))?;
    let lhs = exact_moment(&[(&pairing, false), (&big_f, true), (&big_f, true)])? / m as f64;

    let square = big_f.multiply(&big_f)?;
    let mut rhs = Complex64::new(square.mean().norm_sqr(), 0.0);
    for r in 1..=paired_top(m, n) {
        rhs += build_varsigma(&f, r)?.inner(&build_varphi(&f, r)?)?
            * (factorial_f64(2 * m - r) * factorial_f64(2 * n - r));
    }
    Ok((real_part(lhs)?, real_part(rhs)?))
}

/// Contraction norms for one `(i, j)` with `0 < i+j ≤ l−1`.
///
/// `ff` entries need `i, j ≤ min(m,n)`, `fh` entries need `i ≤ m`, `j ≤ n`;
/// outside those ranges the entry is `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionNorms {
    pub i: usize,
    pub j: usize,
    pub ff: Option<f64>,
    pub fh: Option<f64>,
    pub ff_sym: Option<f64>,
    pub fh_sym: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionProfile {
    pub m: usize,
    pub n: usize,
    pub dim: usize,
    pub entries: Vec<ContractionNorms>,
}

impl ContractionProfile {
    pub fn l(&self) -> usize {
        self.m + self.n
    }

    pub fn l_prime(&self) -> usize {
        2 * self.m.min(self.n)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&ContractionNorms> {
        self.entries.iter().find(|e| e.i == i && e.j == j)
    }

    /// Largest defined non-symmetrized norm.
    pub fn max_plain(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|e| [e.ff, e.fh])
            .flatten()
            .fold(0.0, f64::max)
    }

    /// Largest defined symmetrized norm.
    pub fn max_symmetrized(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|e| [e.ff_sym, e.fh_sym])
            .flatten()
            .fold(0.0, f64::max)
    }

    /// Whether every symmetrized norm is at most its plain counterpart,
    /// up to a relative slack.
    pub fn symmetrized_dominated(&self, rel_tol: f64) -> bool {
        self.entries.iter().all(|e| {
            let ok = |s: Option<f64>, p: Option<f64>| match (s, p) {
                (Some(s), Some(p)) => s <= p * (1.0 + rel_tol) + rel_tol,
                _ => true,
            };
            ok(e.ff_sym, e.ff) && ok(e.fh_sym, e.fh)
        })
    }

    /// Upper bound on the gap from the plain norms alone: the first
    /// expansion, with each `‖ψ_r‖` bounded by the triangle inequality and
    /// `‖f ⊗̃ h‖ ≤ ‖f ⊗ h‖`.
    pub fn gap_upper_bound(&self) -> f64 {
        let (m, n) = (self.m, self.n);
        let l = m + n;
        let mut bound = 0.0;
        for e in &self.entries {
            if let Some(ff) = e.ff {
                bound += ff_norm_weight(m, n, e.i, e.j) * ff * ff;
            }
        }
        for r in 1..l {
            let psi_bound: f64 = self
                .entries
                .iter()
                .filter(|e| e.i + e.j == r)
                .filter_map(|e| {
                    e.fh.map(|x| {
                        binomial_f64(m, e.i).squared()
                            * binomial_f64(n, e.j).squared()
                            * factorial_f64(e.i)
                            * factorial_f64(e.j)
                            * x
                    })
                })
                .sum();
            bound += factorial_f64(l - r).squared() * psi_bound * psi_bound;
        }
        bound
    }
}

/// All contraction norm families over `0 < i+j ≤ l−1`.
pub fn contraction_profile(f: &KernelTensor) -> Result<ContractionProfile> {
    let f = f.symmetrize();
    let h = f.conj_flip();
    let (m, n) = (f.m(), f.n());
    let l = m + n;
    let k = m.min(n);
    let mut entries = Vec::new();
    for i in 0..l {
        for j in 0..l - i {
            if i + j == 0 {
                continue;
            }
            let (ff, ff_sym) = if i <= k && j <= k {
                let c = f.contract(&f, i, j)?;
                (Some(c.norm()), Some(c.symmetrize().norm()))
            } else {
                (None, None)
            };
            let (fh, fh_sym) = if i <= m && j <= n {
                let c = f.contract(&h, i, j)?;
                (Some(c.norm()), Some(c.symmetrize().norm()))
            } else {
                (None, None)
            };
            if ff.is_some() || fh.is_some() {
                entries.push(ContractionNorms {
                    i,
                    j,
                    ff,
                    fh,
                    ff_sym,
                    fh_sym,
                });
            }
        }
    }
    Ok(ContractionProfile {
        m,
        n,
        dim: f.dim(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit11() -> KernelTensor {
        KernelTensor::basis(1, &[0], &[0]).unwrap()
    }

    fn unit20() -> KernelTensor {
        KernelTensor::basis(1, &[0, 0], &[]).unwrap()
    }

    #[test]
    fn builders_on_unit_kernels() {
        let f = unit11();
        let h = f.conj_flip();
        assert_eq!(build_psi(&f, &h, 1).unwrap().entries(), &[c(2.0, 0.0)]);
        assert_eq!(build_theta(&f, &h, 1).unwrap().entries(), &[c(1.0, 0.0)]);

        let f = unit20();
        let h = f.conj_flip();
        let base = f.sym_contract(&h, 1, 0).unwrap();
        assert_eq!(build_psi(&f, &h, 1).unwrap(), base.scale_real(4.0));
        assert_eq!(build_theta(&f, &h, 1).unwrap(), base.scale_real(2.0));

        let f = unit11().scale(c(0.0, 1.0));
        let e = KernelTensor::basis(1, &[0], &[0]).unwrap();
        assert_eq!(build_varsigma(&f, 1).unwrap(), e.scale_real(-1.0));
        assert_eq!(build_varphi(&f, 1).unwrap(), e.scale_real(-2.0));
    }

    #[test]
    fn builder_domain_errors() {
        let f = unit11();
        let h = f.conj_flip();
        assert!(build_psi(&f, &h, 0).is_err());
        assert!(build_psi(&f, &h, 2).is_err());
        assert!(build_varphi(&f, 2).is_err());
        let g = KernelTensor::basis(1, &[], &[0, 0]).unwrap();
        let gh = g.conj_flip();
        assert!(build_theta(&g, &gh, 1).is_err());
        assert!(build_psi(&g, &gh, 1).is_ok());
    }

    #[test]
    fn worked_gaps() {
        assert!((gap_exact(&unit11()).unwrap() - 6.0).abs() < 1e-12);
        assert!((gap_contractions(&unit11()).unwrap() - 6.0).abs() < 1e-12);
        assert!((gap_exact(&unit20()).unwrap() - 16.0).abs() < 1e-12);
        assert!((gap_contractions(&unit20()).unwrap() - 16.0).abs() < 1e-12);
        let z = KernelTensor::basis(1, &[0], &[]).unwrap();
        assert!(gap_exact(&z).unwrap().abs() < 1e-12);
        assert!(gap_contractions(&z).unwrap().abs() < 1e-12);
        let rotated = unit11().scale(c(0.0, 1.0));
        assert!((gap_contractions(&rotated).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn worked_expansions() {
        assert!((gap_expansion_ff(&unit11()).unwrap() - 6.0).abs() < 1e-12);
        assert!((gap_expansion_fh(&unit11()).unwrap() - 6.0).abs() < 1e-12);
        assert!((gap_expansion_ff(&unit20()).unwrap() - 16.0).abs() < 1e-12);
        assert!((gap_expansion_fh(&unit20()).unwrap() - 16.0).abs() < 1e-12);
        let zero = KernelTensor::zeros(2, 1, 1).unwrap();
        assert_eq!(gap_expansion_ff(&zero).unwrap(), 0.0);
        assert_eq!(gap_expansion_fh(&zero).unwrap(), 0.0);
    }

    #[test]
    fn unit_profile_is_all_ones() {
        let p = contraction_profile(&unit11()).unwrap();
        assert_eq!(p.entries.len(), 2);
        for e in &p.entries {
            for v in [e.ff, e.fh, e.ff_sym, e.fh_sym] {
                assert!((v.unwrap() - 1.0).abs() < 1e-14);
            }
        }
        // m=2, n=0: f⊗f contractions are undefined
        let p = contraction_profile(&unit20()).unwrap();
        let e = p.get(1, 0).unwrap();
        assert_eq!(e.ff, None);
        assert!((e.fh.unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn paired_top_values() {
        assert_eq!(paired_top(1, 1), 1);
        assert_eq!(paired_top(2, 2), 3);
        assert_eq!(paired_top(2, 1), 2);
        assert_eq!(paired_top(2, 0), 0);
    }
}
