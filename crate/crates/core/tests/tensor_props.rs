mod common;

use chaosforge_core::{Complex64, KernelTensor};
use common::{raw_kernel, rng};
use proptest::prelude::*;

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Symmetrization by the literal average over all m!·n! slot permutations.
fn brute_symmetrize(k: &KernelTensor) -> KernelTensor {
    let (m, n) = (k.m(), k.n());
    let pu = permutations(m);
    let pb = permutations(n);
    let count = (pu.len() * pb.len()) as f64;
    KernelTensor::from_fn(k.dim(), m, n, |a, b| {
        let mut acc = Complex64::new(0.0, 0.0);
        for s in &pu {
            let a2: Vec<usize> = s.iter().map(|&p| a[p]).collect();
            for t in &pb {
                let b2: Vec<usize> = t.iter().map(|&p| b[p]).collect();
                acc += k.get(&a2, &b2).unwrap();
            }
        }
        acc / count
    })
    .unwrap()
}

/// Contraction by explicit loops over free and paired labels.
fn brute_contract(a: &KernelTensor, b: &KernelTensor, i: usize, j: usize) -> KernelTensor {
    let d = a.dim();
    let (am, an, bm, bn) = (a.m(), a.n(), b.m(), b.n());
    let pairs = i + j;
    let mut total = 1;
    for _ in 0..pairs {
        total *= d;
    }
    KernelTensor::from_fn(d, am + bm - pairs, an + bn - pairs, |u, v| {
        let (au, bu) = u.split_at(am - i);
        let (av, bv) = v.split_at(an - j);
        let mut acc = Complex64::new(0.0, 0.0);
        for mut flat in 0..total {
            let mut labels = vec![0; pairs];
            for x in labels.iter_mut().rev() {
                *x = flat % d;
                flat /= d;
            }
            let (s, t) = labels.split_at(i);
            let a_alpha: Vec<usize> = au.iter().chain(s).copied().collect();
            let a_beta: Vec<usize> = av.iter().chain(t).copied().collect();
            let b_alpha: Vec<usize> = bu.iter().chain(t).copied().collect();
            let b_beta: Vec<usize> = bv.iter().chain(s).copied().collect();
            acc += a.get(&a_alpha, &a_beta).unwrap() * b.get(&b_alpha, &b_beta).unwrap();
        }
        acc
    })
    .unwrap()
}

fn max_abs_diff(a: &KernelTensor, b: &KernelTensor) -> f64 {
    assert!(a.same_shape(b));
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn shape() -> impl Strategy<Value = (usize, usize, usize)> {
    (0usize..=3, 0usize..=3, 1usize..=3).prop_filter("small", |(m, n, d)| {
        m + n <= 4 && d.pow((m + n) as u32) <= 81
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetrize_matches_permutation_average((m, n, d) in shape(), seed in any::<u64>()) {
        let k = raw_kernel(m, n, d, &mut rng(seed));
        prop_assert!(max_abs_diff(&k.symmetrize(), &brute_symmetrize(&k)) < 1e-13);
    }

    #[test]
    fn symmetrize_idempotent_and_contracting((m, n, d) in shape(), seed in any::<u64>()) {
        let k = raw_kernel(m, n, d, &mut rng(seed));
        let s = k.symmetrize();
        prop_assert!(max_abs_diff(&s.symmetrize(), &s) < 1e-14);
        prop_assert!(s.norm() <= k.norm() * (1.0 + 1e-12));
    }

    #[test]
    fn conj_flip_involution((m, n, d) in shape(), seed in any::<u64>()) {
        let k = raw_kernel(m, n, d, &mut rng(seed));
        prop_assert_eq!(k.conj_flip().conj_flip(), k);
    }

    #[test]
    fn inner_is_hermitian((m, n, d) in shape(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = raw_kernel(m, n, d, &mut r);
        let b = raw_kernel(m, n, d, &mut r);
        let ab = a.inner(&b).unwrap();
        let ba = b.inner(&a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12 * (1.0 + ab.norm()));
    }

    #[test]
    fn contract_matches_explicit_loops(
        (am, an) in (0usize..=2, 0usize..=2),
        (bm, bn) in (0usize..=2, 0usize..=2),
        d in 1usize..=3,
        seed in any::<u64>(),
        pick in any::<(u8, u8)>(),
    ) {
        let mut r = rng(seed);
        let a = raw_kernel(am, an, d, &mut r);
        let b = raw_kernel(bm, bn, d, &mut r);
        let i = pick.0 as usize % (am.min(bn) + 1);
        let j = pick.1 as usize % (an.min(bm) + 1);
        let fast = a.contract(&b, i, j).unwrap();
        prop_assert_eq!((fast.m(), fast.n()), (am + bm - i - j, an + bn - i - j));
        prop_assert!(max_abs_diff(&fast, &brute_contract(&a, &b, i, j)) < 1e-12);
        let sym = a.sym_contract(&b, i, j).unwrap();
        prop_assert!(sym.norm() <= fast.norm() * (1.0 + 1e-12));
    }
}

#[test]
fn full_pairing_reproduces_squared_norm() {
    let mut r = rng(11);
    for &(m, n) in &[(1, 1), (2, 0), (2, 1), (2, 2)] {
        for d in 1..=3 {
            let a = raw_kernel(m, n, d, &mut r);
            let s = a.contract(&a.conj_flip(), m, n).unwrap();
            assert_eq!((s.m(), s.n()), (0, 0));
            let want = a.norm_sqr();
            assert!((s.entries()[0] - Complex64::new(want, 0.0)).norm() <= 1e-12 * want);
        }
    }
}

#[test]
fn shape_law_against_conj_flip() {
    let mut r = rng(5);
    let f = raw_kernel(2, 1, 2, &mut r);
    let h = f.conj_flip();
    for i in 0..=2 {
        for j in 0..=1 {
            let c = f.contract(&h, i, j).unwrap();
            assert_eq!(c.order(), 2 * (3 - i - j));
        }
    }
}

#[test]
fn diagonal_kernel_contractions_are_one_over_d() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let f = KernelTensor::from_fn(2, 1, 1, |a, b| {
        Complex64::new(if a[0] == b[0] { s } else { 0.0 }, 0.0)
    })
    .unwrap();
    let direct = brute_contract(&f, &f, 1, 0);
    assert!((direct.norm_sqr() - 0.5).abs() < 1e-15);
    assert!(max_abs_diff(&direct, &f.contract(&f, 1, 0).unwrap()) < 1e-15);
}
