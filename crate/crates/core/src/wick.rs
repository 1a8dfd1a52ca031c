//! Exact Gaussian moments by monomial expansion.
//!
//! A chaos element is expanded into a polynomial in `z_1..z_d, z̄_1..z̄_d`.
//! For independent standard complex Gaussians `E[Z^p Z̄^q] = δ_{pq}·p!` per
//! coordinate, so expectations of polynomials are exact sums over matched
//! monomials. This route shares nothing with the contraction machinery and
//! is used as the arbiter for every identity in the crate.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::chaos::{ChaosElement, GaussianSample};
use crate::combinatorics::factorial_f64;
use crate::error::{Error, Result};
use crate::hermite;

/// Total degree cap for [`exact_moment`].
pub const DEFAULT_DEGREE_LIMIT: usize = 16;

/// Exponent layout `[p_1, q_1, p_2, q_2, ...]`: powers of `z_c` and `z̄_c`.
pub type Exponents = Vec<u8>;

/// Polynomial in `z_c`, `z̄_c` with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct WickPolynomial {
    dim: usize,
    terms: BTreeMap<Exponents, Complex64>,
}

impl WickPolynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; 2 * dim], c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Complex64> {
        &self.terms
    }

    /// Coefficient of the monomial with the given per-coordinate
    /// `(z power, z̄ power)` pairs.
    pub fn coefficient(&self, powers: &[(u8, u8)]) -> Complex64 {
        let key: Exponents = powers.iter().flat_map(|&(p, q)| [p, q]).collect();
        self.terms
            .get(&key)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn add_term(&mut self, exps: Exponents, c: Complex64) {
        debug_assert_eq!(exps.len(), 2 * self.dim);
        if c.re == 0.0 && c.im == 0.0 {
            return;
        }
        *self.terms.entry(exps).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn conjugate(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let swapped = e.chunks(2).flat_map(|pq| [pq[1], pq[0]]).collect();
                (swapped, c.conj())
            })
            .collect();
        Self {
            dim: self.dim,
            terms,
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn eval(&self, sample: &GaussianSample) -> Result<Complex64> {
        if sample.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: sample.dim(),
            });
        }
        let z = sample.values();
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.chunks(2).enumerate().fold(*c, |acc, (k, pq)| {
                    acc * z[k].powu(pq[0] as u32) * z[k].conj().powu(pq[1] as u32)
                })
            })
            .sum())
    }
}

fn monomial_moment(e: &[u8]) -> f64 {
    let mut acc = 1.0;
    for pq in e.chunks(2) {
        if pq[0] != pq[1] {
            return 0.0;
        }
        acc *= factorial_f64(pq[0] as usize);
    }
    acc
}

/// `E[P(Z, Z̄)]` term by term.
pub fn exact_expectation(p: &WickPolynomial) -> Complex64 {
    p.terms.iter().map(|(e, c)| c * monomial_moment(e)).sum()
}

/// `E[P·Q]` without materializing the product.
pub fn expectation_of_product(p: &WickPolynomial, q: &WickPolynomial) -> Result<Complex64> {
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch {
            left: p.dim,
            right: q.dim,
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut e = vec![0u8; 2 * p.dim];
    for (ea, ca) in &p.terms {
        for (eb, cb) in &q.terms {
            for (k, slot) in e.iter_mut().enumerate() {
                *slot = ea[k] + eb[k];
            }
            let w = monomial_moment(&e);
            if w != 0.0 {
                acc += ca * cb * w;
            }
        }
    }
    Ok(acc)
}

/// Exact monomial expansion of a chaos element.
pub fn to_polynomial(f: &ChaosElement) -> WickPolynomial {
    let dim = f.dim();
    let mut out = WickPolynomial::constant(dim, f.constant_term());
    for (_, kernel) in f.components() {
        // collect kernel weight per coordinate count profile
        let mut by_counts: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
        kernel.for_each_indexed(|alpha, beta, v| {
            if v.re == 0.0 && v.im == 0.0 {
                return;
            }
            let mut counts = vec![0usize; 2 * dim];
            alpha.iter().for_each(|&x| counts[2 * x] += 1);
            beta.iter().for_each(|&x| counts[2 * x + 1] += 1);
            *by_counts.entry(counts).or_insert(Complex64::new(0.0, 0.0)) += v;
        });
        for (counts, weight) in by_counts {
            let mut partial: Vec<(Exponents, f64)> = vec![(Vec::with_capacity(2 * dim), 1.0)];
            for ab in counts.chunks(2) {
                let h = hermite::coeffs(ab[0], ab[1]);
                let mut next = Vec::with_capacity(partial.len() * h.terms.len());
                for (e, c) in &partial {
                    for t in &h.terms {
                        let mut e2 = e.clone();
                        e2.push(t.z_power as u8);
                        e2.push(t.zbar_power as u8);
                        next.push((e2, c * t.coeff as f64));
                    }
                }
                partial = next;
            }
            for (e, c) in partial {
                out.add_term(e, weight * c);
            }
        }
    }
    out
}

/// Exact mixed moment `E[∏ F_k or conj(F_k)]`; the flag selects conjugation.
pub fn exact_moment(factors: &[(&ChaosElement, bool)]) -> Result<Complex64> {
    exact_moment_with_limit(factors, DEFAULT_DEGREE_LIMIT)
}

pub fn exact_moment_with_limit(
    factors: &[(&ChaosElement, bool)],
    limit: usize,
) -> Result<Complex64> {
    let Some((first, _)) = factors.first() else {
        return Ok(Complex64::new(1.0, 0.0));
    };
    let dim = first.dim();
    for (f, _) in factors {
        if f.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: f.dim(),
            });
        }
    }
    let degree: usize = factors.iter().map(|(f, _)| f.degree()).sum();
    if degree > limit {
        return Err(Error::DegreeLimit { degree, limit });
    }
    let polys: Vec<WickPolynomial> = factors
        .iter()
        .map(|(f, conj)| {
            let p = to_polynomial(f);
            if *conj {
                p.conjugate()
            } else {
                p
            }
        })
        .collect();
    let (last, rest) = polys.split_last().expect("nonempty");
    let mut acc = WickPolynomial::constant(dim, Complex64::new(1.0, 0.0));
    for p in rest {
        acc = acc.multiply(p)?;
    }
    expectation_of_product(&acc, last)
}
