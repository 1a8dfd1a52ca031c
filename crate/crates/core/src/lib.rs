//! Finite-dimensional complex Wiener chaos calculus over `H = ℂ^d`.
//!
//! The crate is `no_std` (it needs `alloc`) and covers:
//!
//! * [`tensor`]: dense kernels with symmetrization, contraction and the
//!   conjugate flip.
//! * [`hermite`]: Itô's complex Hermite polynomials `J_{m,n}(z, ρ)`.
//! * [`chaos`]: multiple integrals `I_{m,n}(f)`, their pointwise evaluation,
//!   and the product formula.
//! * [`wick`]: exact Gaussian moments through monomial expansion.
//! * [`sampling`]: standard complex Gaussian draws.
//! * [`malliavin`]: the derivatives `D`, `D̄` and Ornstein-Uhlenbeck
//!   operators `L`, `L̄`.
//! * [`identities`]: the symmetrized-contraction expansion of the
//!   fourth-moment gap `E|F|⁴ − 2(E|F|²)² − |E F²|²`.
//! * [`families`]: kernel sequence generators.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chaos;
pub mod combinatorics;
pub mod error;
pub mod families;
pub mod hermite;
pub mod identities;
pub mod malliavin;
pub mod sampling;
pub mod tensor;
pub mod wick;

pub use chaos::{ChaosElement, GaussianSample, Grade};
pub use error::{Error, Result};
pub use identities::ContractionProfile;
pub use malliavin::VectorChaos;
pub use num_complex::Complex64;
pub use tensor::KernelTensor;
pub use wick::WickPolynomial;
