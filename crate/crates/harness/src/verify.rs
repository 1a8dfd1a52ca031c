//! Named verification suites. Every check yields one `VerificationReport`.
//!
//! Unless a case states otherwise, `rel_err = abs_err / max(1, |rhs|)` and
//! a check passes when `rel_err ≤ tol`. Checks that range over a grid or a
//! batch of samples report their worst point.

use std::str::FromStr;

use chaosforge_core::combinatorics::factorial_f64;
use chaosforge_core::families::{gen_diagonal, gen_gaussian};
use chaosforge_core::hermite::{self, RaiseOrder};
use chaosforge_core::identities::{
    build_psi, build_theta, contraction_profile, derivative_norm_identity,
    derivative_pairing_identity, gap_contractions, gap_exact, gap_expansion_ff, gap_expansion_fh,
};
use chaosforge_core::malliavin::{h_inner, mall_d, mall_dbar, ou_l, ou_lbar, wirtinger_fd};
use chaosforge_core::sampling::{complex_normal, sample_gaussian};
use chaosforge_core::wick::{exact_moment, to_polynomial};
use chaosforge_core::{ChaosElement, Complex64, KernelTensor};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{HarnessError, Result};
use crate::formats::VerificationReport;
use crate::pool;

pub const DEFAULT_CORPUS_SIZE: usize = 200;
pub const IDENTITY_TOL: f64 = 1e-9;
pub const CORPUS_SHAPES: [(usize, usize); 6] = [(1, 1), (2, 0), (0, 2), (2, 1), (1, 2), (2, 2)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Hermite,
    Chaos,
    Malliavin,
    Identities,
    Expansions,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Hermite,
        Suite::Chaos,
        Suite::Malliavin,
        Suite::Identities,
        Suite::Expansions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hermite => "hermite",
            Suite::Chaos => "chaos",
            Suite::Malliavin => "malliavin",
            Suite::Identities => "identities",
            Suite::Expansions => "lemma31",
        }
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

pub fn run_verify(suite: &str, seed: u64) -> Result<Vec<VerificationReport>> {
    Ok(run_suite(suite.parse()?, seed))
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<VerificationReport> {
    match suite {
        Suite::Hermite => hermite_suite(seed),
        Suite::Chaos => chaos_suite(seed),
        Suite::Malliavin => malliavin_suite(seed),
        Suite::Identities => identities_suite(seed, DEFAULT_CORPUS_SIZE),
        Suite::Expansions => expansion_suite(seed, DEFAULT_CORPUS_SIZE),
    }
}

pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// Generator for check group `stream` under the master seed.
pub fn case_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Symmetrized Gaussian kernels cycling through `CORPUS_SHAPES` and
/// `d = 1, 2, 3`; element `c` draws from stream `c`.
pub fn corpus(seed: u64, size: usize) -> Vec<KernelTensor> {
    (0..size)
        .map(|c| {
            let (m, n) = CORPUS_SHAPES[c % CORPUS_SHAPES.len()];
            let d = 1 + (c / CORPUS_SHAPES.len()) % 3;
            gen_gaussian(m, n, d, &mut case_rng(seed, c as u64)).expect("positive dimension")
        })
        .collect()
}

struct Recorder {
    seed: u64,
    out: Vec<VerificationReport>,
}

impl Recorder {
    fn new(seed: u64) -> Self {
        Self {
            seed,
            out: Vec::new(),
        }
    }

    fn push(
        &mut self,
        case: String,
        shape: (usize, usize, usize),
        sides: (f64, f64),
        errs: (f64, f64),
        pass: bool,
    ) {
        let (m, n, d) = shape;
        let ((lhs, rhs), (abs_err, rel_err)) = (sides, errs);
        self.out.push(VerificationReport {
            case,
            m,
            n,
            d,
            seed: self.seed,
            lhs,
            rhs,
            abs_err,
            rel_err,
            pass,
        });
    }

    fn real(&mut self, case: String, shape: (usize, usize, usize), lhs: f64, rhs: f64, tol: f64) {
        let abs_err = (lhs - rhs).abs();
        let rel_err = abs_err / rhs.abs().max(1.0);
        self.push(case, shape, (lhs, rhs), (abs_err, rel_err), rel_err <= tol);
    }

    fn complex(
        &mut self,
        case: String,
        shape: (usize, usize, usize),
        lhs: Complex64,
        rhs: Complex64,
        tol: f64,
    ) {
        let abs_err = (lhs - rhs).norm();
        let rel_err = abs_err / rhs.norm().max(1.0);
        self.push(
            case,
            shape,
            (lhs.re, rhs.re),
            (abs_err, rel_err),
            rel_err <= tol,
        );
    }

    fn worst(
        &mut self,
        case: String,
        shape: (usize, usize, usize),
        pairs: impl IntoIterator<Item = (Complex64, Complex64)>,
        tol: f64,
    ) {
        let worst = pairs
            .into_iter()
            .map(|(a, b)| ((a - b).norm() / b.norm().max(1.0), a, b))
            .fold(
                None,
                |acc: Option<(f64, Complex64, Complex64)>, x| match acc {
                    Some(best) if best.0 >= x.0 => Some(best),
                    _ => Some(x),
                },
            );
        let (_, a, b) = worst.expect("at least one sample");
        self.complex(case, shape, a, b, tol);
    }

    fn error(&mut self, case: String, shape: (usize, usize, usize), err: impl std::fmt::Display) {
        self.push(
            format!("{case}: {err}"),
            shape,
            (f64::NAN, f64::NAN),
            (f64::NAN, f64::NAN),
            false,
        );
    }
}

fn grid() -> Vec<Complex64> {
    let mut zs = Vec::new();
    for r in [0.0, 0.3, 1.0, 1.7, 2.0] {
        for k in 0..8 {
            zs.push(Complex64::from_polar(
                r,
                k as f64 * std::f64::consts::FRAC_PI_4 + 0.1,
            ));
        }
    }
    zs
}

const RHOS: [f64; 3] = [0.5, 1.0, 2.0];

fn basis_element(d: usize, alpha: &[usize], beta: &[usize]) -> ChaosElement {
    ChaosElement::integral(&KernelTensor::basis(d, alpha, beta).expect("valid basis index"))
}

pub fn hermite_suite(seed: u64) -> Vec<VerificationReport> {
    let mut rec = Recorder::new(seed);
    let zs = grid();

    // Closed form and both raise orders, error scaled by Σ|term|.
    for m in 0..=10 {
        for n in 0..=10 {
            let coeffs = hermite::coeffs(m, n);
            for (case, other) in [
                ("hermite.closed_form", None),
                ("hermite.raise_order", Some(RaiseOrder::BarredFirst)),
            ] {
                let mut worst = (0.0, Complex64::default(), Complex64::default(), 0.0);
                for &z in &zs {
                    for rho in RHOS {
                        let a = hermite::eval(m, n, z, rho);
                        let b = match other {
                            None => coeffs.eval(z, rho),
                            Some(order) => hermite::eval_ordered(m, n, z, rho, order),
                        };
                        let scale = coeffs.magnitude_scale(z, rho).max(1.0);
                        let err = (a - b).norm() / scale;
                        if err >= worst.0 {
                            worst = (err, a, b, (a - b).norm());
                        }
                    }
                }
                let (rel, a, b, abs) = worst;
                rec.push(
                    case.into(),
                    (m, n, 1),
                    (a.re, b.re),
                    (abs, rel),
                    rel <= 1e-12,
                );
            }
        }
    }

    // Closed-form coefficients against both recursions, exactly.
    for m in 0..=6 {
        for n in 0..=6 {
            let mismatch = recursion_mismatch(m, n);
            rec.push(
                "hermite.coeffs_recursion".into(),
                (m, n, 1),
                (mismatch, 0.0),
                (mismatch, mismatch),
                mismatch == 0.0,
            );
        }
    }

    // Derivative identities against central differences.
    let h = 1e-5;
    let i = Complex64::new(0.0, 1.0);
    for m in 0..=5 {
        for n in 0..=5 {
            let (mut dzs, mut dzbs, mut drhos) = (Vec::new(), Vec::new(), Vec::new());
            for &z in &zs {
                for rho in RHOS {
                    let j = |w: Complex64, r: f64| hermite::eval(m, n, w, r);
                    let dx = (j(z + h, rho) - j(z - h, rho)) / (2.0 * h);
                    let dy = (j(z + i * h, rho) - j(z - i * h, rho)) / (2.0 * h);
                    dzs.push(((dx - i * dy) * 0.5, hermite::dz(m, n, z, rho)));
                    dzbs.push(((dx + i * dy) * 0.5, hermite::dzbar(m, n, z, rho)));
                    drhos.push((
                        (j(z, rho + h) - j(z, rho - h)) / (2.0 * h),
                        hermite::drho(m, n, z, rho),
                    ));
                }
            }
            rec.worst("hermite.dz_fd".into(), (m, n, 1), dzs, 1e-6);
            rec.worst("hermite.dzbar_fd".into(), (m, n, 1), dzbs, 1e-6);
            rec.worst("hermite.drho_fd".into(), (m, n, 1), drhos, 1e-6);
        }
    }

    // E[J_{m,n} conj(J_{p,q})] = δ δ m! n! under the exact oracle.
    for m in 0..=3 {
        for n in 0..=3 {
            let a = basis_element(1, &vec![0; m], &vec![0; n]);
            for p in 0..=3 {
                for q in 0..=3 {
                    let b = basis_element(1, &vec![0; p], &vec![0; q]);
                    let want = if (m, n) == (p, q) {
                        factorial_f64(m) * factorial_f64(n)
                    } else {
                        0.0
                    };
                    match exact_moment(&[(&a, false), (&b, true)]) {
                        Ok(got) => rec.complex(
                            format!("hermite.orthogonality vs ({p},{q})"),
                            (m, n, 1),
                            got,
                            Complex64::new(want, 0.0),
                            0.0,
                        ),
                        Err(e) => rec.error("hermite.orthogonality".into(), (m, n, 1), e),
                    }
                }
            }
        }
    }

    // I_{m,n}(h^⊗m ⊗ h̄^⊗n) = J_{m,n}(Z(h), ‖h‖²).
    let mut rng = case_rng(seed, 1);
    for (m, n) in [(1, 1), (2, 1), (2, 2), (3, 1)] {
        let d = 2;
        let hv: Vec<Complex64> = (0..d).map(|_| complex_normal(&mut rng)).collect();
        let k = KernelTensor::from_fn(d, m, n, |a, b| {
            a.iter().map(|&x| hv[x]).product::<Complex64>()
                * b.iter().map(|&x| hv[x].conj()).product::<Complex64>()
        })
        .expect("finite kernel");
        let rho: f64 = hv.iter().map(|x| x.norm_sqr()).sum();
        let f = ChaosElement::integral(&k);
        let pairs: Vec<_> = (0..20)
            .map(|_| {
                let s = sample_gaussian(d, &mut rng);
                let zh: Complex64 = hv.iter().zip(s.values()).map(|(h, z)| h * z).sum();
                (
                    f.evaluate(&s).expect("dimension matches"),
                    hermite::eval(m, n, zh, rho),
                )
            })
            .collect();
        rec.worst("hermite.rank_one_integral".into(), (m, n, d), pairs, 1e-12);
    }
    rec.out
}

/// Largest coefficient difference between `J_{m+1,n}`, `J_{m,n+1}` and the
/// recursions applied to the closed forms of lower order.
fn recursion_mismatch(m: usize, n: usize) -> f64 {
    let c = |a: usize, b: usize, k: usize, p: usize, q: usize| -> i64 {
        if p > a || q > b {
            return 0;
        }
        hermite::coeffs(a, b).coefficient(k, p, q)
    };
    let mut worst = 0i64;
    for k in 0..=m.min(n) + 1 {
        for p in 0..=m + 1 {
            for q in 0..=n + 1 {
                // J_{m+1,n} = z J_{m,n} − nρ J_{m,n−1}
                let mut rhs = if p > 0 { c(m, n, k, p - 1, q) } else { 0 };
                if n > 0 && k > 0 {
                    rhs -= n as i64 * c(m, n - 1, k - 1, p, q);
                }
                worst = worst.max((c(m + 1, n, k, p, q) - rhs).abs());
                // J_{m,n+1} = z̄ J_{m,n} − mρ J_{m−1,n}
                let mut rhs = if q > 0 { c(m, n, k, p, q - 1) } else { 0 };
                if m > 0 && k > 0 {
                    rhs -= m as i64 * c(m - 1, n, k - 1, p, q);
                }
                worst = worst.max((c(m, n + 1, k, p, q) - rhs).abs());
            }
        }
    }
    worst as f64
}

const PRODUCT_GRADES: [(usize, usize); 4] = [(1, 0), (1, 1), (2, 0), (2, 1)];

pub fn chaos_suite(seed: u64) -> Vec<VerificationReport> {
    let mut rec = Recorder::new(seed);
    let mut rng = case_rng(seed, 1);

    for d in 1..=3 {
        for &(m, n) in &PRODUCT_GRADES {
            for &(p, q) in &PRODUCT_GRADES {
                let f = ChaosElement::integral(&gen_gaussian(m, n, d, &mut rng).expect("d > 0"));
                let g = ChaosElement::integral(&gen_gaussian(p, q, d, &mut rng).expect("d > 0"));
                let case = format!("chaos.product_pointwise x({p},{q})");
                match f.multiply(&g) {
                    Ok(fg) => {
                        let pairs: Vec<_> = (0..20)
                            .map(|_| {
                                let s = sample_gaussian(d, &mut rng);
                                let rhs =
                                    f.evaluate(&s).expect("dim") * g.evaluate(&s).expect("dim");
                                (fg.evaluate(&s).expect("dim"), rhs)
                            })
                            .collect();
                        rec.worst(case, (m, n, d), pairs, 1e-9);
                    }
                    Err(e) => rec.error(case, (m, n, d), e),
                }
            }
        }
    }

    for d in 1..=3 {
        for &(m, n) in &[(1, 0), (1, 1), (2, 1), (0, 3), (2, 2)] {
            let k = gen_gaussian(m, n, d, &mut rng).expect("d > 0");
            let f = ChaosElement::integral(&k);
            let fc = f.conjugate();
            let p = to_polynomial(&f);
            let (mut conj, mut poly) = (Vec::new(), Vec::new());
            for _ in 0..20 {
                let s = sample_gaussian(d, &mut rng);
                let v = f.evaluate(&s).expect("dim");
                conj.push((fc.evaluate(&s).expect("dim"), v.conj()));
                poly.push((p.eval(&s).expect("dim"), v));
            }
            rec.worst("chaos.conjugate_pointwise".into(), (m, n, d), conj, 1e-12);
            rec.worst("chaos.polynomial_pointwise".into(), (m, n, d), poly, 1e-10);

            let shape = (m, n, d);
            match exact_moment(&[(&f, false), (&f, true)]) {
                Ok(e2) => rec.complex(
                    "chaos.isometry".into(),
                    shape,
                    e2,
                    Complex64::new(factorial_f64(m) * factorial_f64(n) * k.norm_sqr(), 0.0),
                    1e-10,
                ),
                Err(e) => rec.error("chaos.isometry".into(), shape, e),
            }
            match exact_moment(&[(&f, false)]) {
                Ok(mean) => rec.complex(
                    "chaos.centering".into(),
                    shape,
                    mean,
                    Complex64::default(),
                    1e-12,
                ),
                Err(e) => rec.error("chaos.centering".into(), shape, e),
            }
        }
    }

    // Sampler moments over 10^5 draws; pass within 5 standard errors.
    let mut srng = case_rng(seed, 2);
    let draws: Vec<Complex64> = (0..100_000).map(|_| complex_normal(&mut srng)).collect();
    type Stat = fn(Complex64) -> Complex64;
    let stats: [(&str, Stat, Complex64); 3] = [
        ("chaos.sampler_mean", |z| z, Complex64::new(0.0, 0.0)),
        (
            "chaos.sampler_abs2",
            |z| Complex64::new(z.norm_sqr(), 0.0),
            Complex64::new(1.0, 0.0),
        ),
        ("chaos.sampler_square", |z| z * z, Complex64::new(0.0, 0.0)),
    ];
    for (case, stat, target) in stats {
        let xs: Vec<Complex64> = draws.iter().map(|&z| stat(z)).collect();
        let count = xs.len() as f64;
        let mean = xs.iter().sum::<Complex64>() / count;
        let var = xs.iter().map(|x| (x - mean).norm_sqr()).sum::<f64>() / (count - 1.0);
        let se = (var / count).sqrt();
        let abs_err = (mean - target).norm();
        rec.push(
            case.into(),
            (0, 0, 1),
            (mean.re, target.re),
            (abs_err, abs_err / target.norm().max(1.0)),
            abs_err <= 5.0 * se,
        );
    }

    rec.out
        .extend(dual_oracle_checks(seed, DEFAULT_CORPUS_SIZE));
    rec.out
}

/// `E|F|⁴` by monomial Wick expansion against product formula plus
/// isometry, over the corpus.
pub fn dual_oracle_checks(seed: u64, size: usize) -> Vec<VerificationReport> {
    let kernels = corpus(seed, size);
    let rows = pool::map_indexed(kernels.len(), pool::worker_count(), |c| {
        let k = &kernels[c];
        let mut rec = Recorder::new(seed);
        let shape = (k.m(), k.n(), k.dim());
        let case = format!("chaos.dual_oracle #{c}");
        let f = ChaosElement::integral(k);
        let run = || -> chaosforge_core::Result<(Complex64, Complex64)> {
            let wick = exact_moment(&[(&f, false), (&f, true), (&f, false), (&f, true)])?;
            let abs2 = f.multiply(&f.conjugate())?;
            Ok((abs2.l2_inner(&abs2)?, wick))
        };
        match run() {
            Ok((iso, wick)) => rec.complex(case, shape, iso, wick, IDENTITY_TOL),
            Err(e) => rec.error(case, shape, e),
        }
        rec.out
    });
    rows.into_iter().flatten().collect()
}

const MALLIAVIN_GRADES: [(usize, usize); 7] =
    [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1), (1, 2), (2, 2)];

fn random_element(grades: &[(usize, usize)], d: usize, rng: &mut ChaCha8Rng) -> ChaosElement {
    let mut f = ChaosElement::zero(d);
    for &(m, n) in grades {
        f.add_kernel(
            &gen_gaussian(m, n, d, rng).expect("d > 0"),
            Complex64::new(1.0, 0.0),
        )
        .expect("dimension matches");
    }
    f
}

pub fn malliavin_suite(seed: u64) -> Vec<VerificationReport> {
    let mut rec = Recorder::new(seed);
    let mut rng = case_rng(seed, 1);

    for d in 1..=3 {
        for &(m, n) in &MALLIAVIN_GRADES {
            let f = ChaosElement::integral(&gen_gaussian(m, n, d, &mut rng).expect("d > 0"));
            let (df, dbf) = (mall_d(&f), mall_dbar(&f));
            let (mut dz, mut dzb) = (Vec::new(), Vec::new());
            for _ in 0..20 {
                let s = sample_gaussian(d, &mut rng);
                let (dv, dbv) = (
                    df.evaluate(&s).expect("dim"),
                    dbf.evaluate(&s).expect("dim"),
                );
                for k in 0..d {
                    let (fz, fzb) = wirtinger_fd(&f, &s, k).expect("dim");
                    dz.push((dv[k], fz));
                    dzb.push((dbv[k], fzb));
                }
            }
            rec.worst("malliavin.d_vs_wirtinger".into(), (m, n, d), dz, 1e-6);
            rec.worst("malliavin.dbar_vs_wirtinger".into(), (m, n, d), dzb, 1e-6);
        }
    }

    // L and L̄ act as m and n, compared entrywise and exactly.
    for &(m, n) in &MALLIAVIN_GRADES {
        let f = ChaosElement::integral(&gen_gaussian(m, n, 2, &mut rng).expect("d > 0"));
        for (case, got, eig) in [
            ("malliavin.l_eigen", ou_l(&f), m),
            ("malliavin.lbar_eigen", ou_lbar(&f), n),
        ] {
            let want = f.scale(Complex64::new(eig as f64, 0.0));
            let diff = got
                .add(&want.scale(Complex64::new(-1.0, 0.0)))
                .expect("dimension matches");
            let err = diff.l2_norm_sqr().sqrt();
            rec.push(
                case.into(),
                (m, n, 2),
                (got.l2_norm_sqr().sqrt(), want.l2_norm_sqr().sqrt()),
                (err, err),
                err == 0.0,
            );
        }
    }

    // E[Z_k conj(F)] = E[conj((DF)_k)]
    for d in 1..=3 {
        for _ in 0..3 {
            let f = random_element(&[(1, 0), (1, 1), (2, 0), (2, 1)], d, &mut rng);
            let df = mall_d(&f);
            for k in 0..d {
                let zk = basis_element(d, &[k], &[]);
                let run = || -> chaosforge_core::Result<(Complex64, Complex64)> {
                    Ok((
                        exact_moment(&[(&zk, false), (&f, true)])?,
                        exact_moment(&[(df.component(k), true)])?,
                    ))
                };
                match run() {
                    Ok((lhs, rhs)) => {
                        rec.complex(format!("malliavin.ibp k={k}"), (2, 1, d), lhs, rhs, 1e-10)
                    }
                    Err(e) => rec.error("malliavin.ibp".into(), (2, 1, d), e),
                }
            }
        }
    }

    // E[L(G) conj(F)] = E⟨DG, DF⟩
    for d in 1..=2 {
        for &(m, n) in &MALLIAVIN_GRADES {
            let f = random_element(&[(m, n), (1, 1)], d, &mut rng);
            let g = random_element(&[(m, n), (2, 1)], d, &mut rng);
            let run = || -> chaosforge_core::Result<(Complex64, Complex64)> {
                let lhs = exact_moment(&[(&ou_l(&g), false), (&f, true)])?;
                let pairing = h_inner(&mall_d(&g), &mall_d(&f))?;
                Ok((lhs, exact_moment(&[(&pairing, false)])?))
            };
            match run() {
                Ok((lhs, rhs)) => {
                    rec.complex("malliavin.l_duality".into(), (m, n, d), lhs, rhs, 1e-10)
                }
                Err(e) => rec.error("malliavin.l_duality".into(), (m, n, d), e),
            }
        }
    }

    // D(F̄F²) = 2|F|² DF + F² DF̄, pointwise.
    for (d, grades) in [(2usize, &MALLIAVIN_GRADES[..]), (3, &MALLIAVIN_GRADES[..5])] {
        for &(m, n) in grades {
            let f = ChaosElement::integral(&gen_gaussian(m, n, d, &mut rng).expect("d > 0"));
            let fc = f.conjugate();
            let run = || -> chaosforge_core::Result<_> {
                let square = f.multiply(&f)?;
                let abs2 = f.multiply(&fc)?;
                let lhs = mall_d(&square.multiply(&fc)?);
                let rhs = mall_d(&f)
                    .times(&abs2)?
                    .scale(Complex64::new(2.0, 0.0))
                    .add(&mall_d(&fc).times(&square)?)?;
                Ok((lhs, rhs))
            };
            match run() {
                Ok((lhs, rhs)) => {
                    let mut pairs = Vec::new();
                    for _ in 0..20 {
                        let s = sample_gaussian(d, &mut rng);
                        let (a, b) = (
                            lhs.evaluate(&s).expect("dim"),
                            rhs.evaluate(&s).expect("dim"),
                        );
                        pairs.extend(a.into_iter().zip(b));
                    }
                    rec.worst("malliavin.product_rule".into(), (m, n, d), pairs, 1e-8);
                }
                Err(e) => rec.error("malliavin.product_rule".into(), (m, n, d), e),
            }
        }
    }

    // Chaos expansions of (1/m)‖DF‖² and (1/m)⟨DF, DF̄⟩ paired with F̄².
    for d in 1..=3 {
        for &(m, n) in &[(1, 0), (1, 1), (2, 0), (2, 1), (1, 2), (2, 2)] {
            let k = gen_gaussian(m, n, d, &mut rng).expect("d > 0");
            for (case, result) in [
                (
                    "malliavin.derivative_norm_expansion",
                    derivative_norm_identity(&k),
                ),
                (
                    "malliavin.derivative_pairing_expansion",
                    derivative_pairing_identity(&k),
                ),
            ] {
                match result {
                    Ok((lhs, rhs)) => rec.real(case.into(), (m, n, d), lhs, rhs, IDENTITY_TOL),
                    Err(e) => rec.error(case.into(), (m, n, d), e),
                }
            }
        }
    }
    rec.out
}

pub fn identities_suite(seed: u64, size: usize) -> Vec<VerificationReport> {
    let mut rec = Recorder::new(seed);
    for (f, want) in worked_cases() {
        let shape = (f.m(), f.n(), f.dim());
        for (case, got) in [
            ("identities.worked_exact", gap_exact(&f)),
            ("identities.worked_contractions", gap_contractions(&f)),
        ] {
            match got {
                Ok(v) => rec.real(case.into(), shape, v, want, 1e-10),
                Err(e) => rec.error(case.into(), shape, e),
            }
        }
    }

    // ψ₁ = 2 and ϑ₁ = 1 for e₁ ⊗ ē₁.
    let e = KernelTensor::basis(1, &[0], &[0]).expect("valid basis");
    let h = e.conj_flip();
    for (case, built, want) in [
        ("identities.psi1", build_psi(&e, &h, 1), 2.0),
        ("identities.theta1", build_theta(&e, &h, 1), 1.0),
    ] {
        match built {
            Ok(k) => rec.complex(
                case.into(),
                (1, 1, 1),
                k.entries()[0],
                Complex64::new(want, 0.0),
                0.0,
            ),
            Err(err) => rec.error(case.into(), (1, 1, 1), err),
        }
    }

    // Diagonal kernels: every plain contraction norm² is 1/d.
    for d in [1, 2, 3, 4] {
        let f = gen_diagonal(1, 1, d).expect("d > 0");
        match contraction_profile(&f) {
            Ok(p) => {
                let norms: Vec<f64> = p
                    .entries
                    .iter()
                    .flat_map(|e| [e.ff, e.fh])
                    .flatten()
                    .collect();
                let worst = norms.iter().map(|x| x * x).fold(1.0 / d as f64, |w, x| {
                    if (x - 1.0 / d as f64).abs() > (w - 1.0 / d as f64).abs() {
                        x
                    } else {
                        w
                    }
                });
                rec.real(
                    "identities.diagonal_norm_sqr".into(),
                    (1, 1, d),
                    worst,
                    1.0 / d as f64,
                    1e-12,
                );
            }
            Err(err) => rec.error("identities.diagonal_norm_sqr".into(), (1, 1, d), err),
        }
    }

    let kernels = corpus(seed, size);
    let rows = pool::map_indexed(kernels.len(), pool::worker_count(), |c| {
        let f = &kernels[c];
        let mut rec = Recorder::new(seed);
        let shape = (f.m(), f.n(), f.dim());
        let run = || -> chaosforge_core::Result<(f64, f64, f64)> {
            let p = contraction_profile(f)?;
            let excess = p
                .entries
                .iter()
                .flat_map(|e| [(e.ff_sym, e.ff), (e.fh_sym, e.fh)])
                .filter_map(|(s, p)| Some(s? - p?))
                .fold(0.0, f64::max);
            Ok((gap_contractions(f)?, gap_exact(f)?, excess))
        };
        match run() {
            Ok((via, exact, excess)) => {
                rec.real(
                    format!("identities.gap #{c}"),
                    shape,
                    via,
                    exact,
                    IDENTITY_TOL,
                );
                rec.push(
                    format!("identities.sym_le_plain #{c}"),
                    shape,
                    (excess, 0.0),
                    (excess, excess),
                    excess <= 1e-12,
                );
            }
            Err(e) => rec.error(format!("identities.gap #{c}"), shape, e),
        }
        rec.out
    });
    rec.out.extend(rows.into_iter().flatten());
    rec.out
}

/// `(e₁⊗ē₁, 6)` and `(e₁⊗e₁, 16)`, both in `d = 1`.
pub fn worked_cases() -> [(KernelTensor, f64); 2] {
    [
        (
            KernelTensor::basis(1, &[0], &[0]).expect("valid basis"),
            6.0,
        ),
        (
            KernelTensor::basis(1, &[0, 0], &[]).expect("valid basis"),
            16.0,
        ),
    ]
}

pub fn expansion_suite(seed: u64, size: usize) -> Vec<VerificationReport> {
    let kernels = corpus(seed, size);
    let rows = pool::map_indexed(kernels.len(), pool::worker_count(), |c| {
        let f = &kernels[c];
        let mut rec = Recorder::new(seed);
        let shape = (f.m(), f.n(), f.dim());
        let run = || -> chaosforge_core::Result<(f64, f64, f64)> {
            Ok((gap_expansion_ff(f)?, gap_expansion_fh(f)?, gap_exact(f)?))
        };
        match run() {
            Ok((a, b, exact)) => {
                rec.real(
                    format!("expansions.expansion_ff #{c}"),
                    shape,
                    a,
                    exact,
                    IDENTITY_TOL,
                );
                rec.real(
                    format!("expansions.expansion_fh #{c}"),
                    shape,
                    b,
                    exact,
                    IDENTITY_TOL,
                );
            }
            Err(e) => rec.error(format!("expansions #{c}"), shape, e),
        }
        rec.out
    });
    rows.into_iter().flatten().collect()
}
