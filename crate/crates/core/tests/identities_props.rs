mod common;

use chaosforge_core::combinatorics::factorial_f64;
use chaosforge_core::families::gen_diagonal;
use chaosforge_core::identities::{
    build_varphi, build_varsigma, contraction_profile, exact_moments, gap_contractions, gap_exact,
    gap_expansion_ff, gap_expansion_fh,
};
use chaosforge_core::{Complex64, KernelTensor};
use common::{random_kernel, rel_err, rng};

const SHAPES: [(usize, usize); 6] = [(1, 1), (2, 0), (0, 2), (2, 1), (1, 2), (2, 2)];

fn corpus(seed: u64, count: usize) -> Vec<KernelTensor> {
    let mut r = rng(seed);
    (0..count)
        .map(|idx| {
            let (m, n) = SHAPES[idx % SHAPES.len()];
            let d = 1 + (idx / SHAPES.len()) % 3;
            random_kernel(m, n, d, &mut r)
        })
        .collect()
}

#[test]
fn fourth_moment_gap_matches_contraction_expansion() {
    for f in corpus(301, 60) {
        let exact = gap_exact(&f).unwrap();
        let via = gap_contractions(&f).unwrap();
        assert!(
            rel_err(via, exact) < 1e-9,
            "({},{}) d={}: {via} vs {exact}",
            f.m(),
            f.n(),
            f.dim()
        );
        assert!(exact >= -1e-10);
    }
}

#[test]
fn both_plain_norm_expansions_match() {
    for f in corpus(302, 60) {
        let exact = gap_exact(&f).unwrap();
        let a = gap_expansion_ff(&f).unwrap();
        let b = gap_expansion_fh(&f).unwrap();
        assert!(
            rel_err(a, exact) < 1e-9,
            "a ({},{}) d={}: {a} vs {exact}",
            f.m(),
            f.n(),
            f.dim()
        );
        assert!(
            rel_err(b, exact) < 1e-9,
            "b ({},{}) d={}: {b} vs {exact}",
            f.m(),
            f.n(),
            f.dim()
        );
    }
}

/// Stopping the ⟨ς_r, φ_r⟩ sum at r = l'−1 loses the top term whenever
/// m ≠ n, where the top component of F² is not a constant.
#[test]
fn top_paired_term_is_needed_when_grades_differ() {
    let mut r = rng(303);
    let f = random_kernel(2, 1, 2, &mut r);
    let exact = gap_exact(&f).unwrap();
    let top = 2;
    let missing = build_varsigma(&f, top)
        .unwrap()
        .inner(&build_varphi(&f, top).unwrap())
        .unwrap()
        .re
        * factorial_f64(2)
        * factorial_f64(0);
    assert!(missing.abs() > 1e-3);
    let full = gap_contractions(&f).unwrap();
    assert!(rel_err(full, exact) < 1e-9);
    assert!(rel_err(full - missing, exact) > 1e-6);
}

#[test]
fn conj_flip_leaves_gap_unchanged() {
    let mut r = rng(304);
    for &(m, n) in &SHAPES {
        let f = random_kernel(m, n, 2, &mut r);
        let g = gap_exact(&f).unwrap();
        assert!(rel_err(gap_exact(&f.conj_flip()).unwrap(), g) < 1e-10);
    }
}

#[test]
fn phase_and_scaling_laws() {
    let mut r = rng(305);
    for &(m, n) in &SHAPES {
        let f = random_kernel(m, n, 2, &mut r);
        let g = gap_exact(&f).unwrap();
        let p = contraction_profile(&f).unwrap();
        let rot = f.scale(Complex64::from_polar(1.0, 0.77));
        assert!(rel_err(gap_exact(&rot).unwrap(), g) < 1e-10);
        assert!(rel_err(gap_contractions(&rot).unwrap(), g) < 1e-10);
        let pr = contraction_profile(&rot).unwrap();
        for (a, b) in p.entries.iter().zip(&pr.entries) {
            for (x, y) in [
                (a.ff, b.ff),
                (a.fh, b.fh),
                (a.ff_sym, b.ff_sym),
                (a.fh_sym, b.fh_sym),
            ] {
                if let (Some(x), Some(y)) = (x, y) {
                    assert!(rel_err(y, x) < 1e-10);
                }
            }
        }
        let c = Complex64::new(0.6, -1.1);
        let scaled = gap_exact(&f.scale(c)).unwrap();
        assert!(rel_err(scaled, c.norm_sqr().powi(2) * g) < 1e-10);
    }
}

#[test]
fn square_mean_vanishes_off_diagonal_grades() {
    let mut r = rng(306);
    for &(m, n) in &[(2, 0), (0, 2), (2, 1), (1, 2), (3, 1)] {
        let f = random_kernel(m, n, 2, &mut r);
        assert!(exact_moments(&f).unwrap().square.norm() < 1e-12);
    }
}

#[test]
fn diagonal_profile_is_one_over_d() {
    for &(m, n) in &[(1, 1), (2, 0), (2, 1), (2, 2)] {
        for d in 2..=3 {
            let f = gen_diagonal(m, n, d).unwrap();
            let p = contraction_profile(&f).unwrap();
            for e in &p.entries {
                for v in [e.ff, e.fh].into_iter().flatten() {
                    assert!(
                        (v * v - 1.0 / d as f64).abs() < 1e-12,
                        "({m},{n}) d={d} ({},{})",
                        e.i,
                        e.j
                    );
                }
            }
            assert!(p.symmetrized_dominated(1e-12));
        }
    }
}

#[test]
fn symmetrized_norms_never_exceed_plain_ones() {
    for f in corpus(307, 36) {
        let p = contraction_profile(&f).unwrap();
        assert!(p.symmetrized_dominated(1e-12));
        assert!(gap_exact(&f).unwrap() <= p.gap_upper_bound() * (1.0 + 1e-9) + 1e-12);
    }
}
