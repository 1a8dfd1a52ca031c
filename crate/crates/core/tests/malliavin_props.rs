mod common;

use chaosforge_core::identities::{derivative_norm_identity, derivative_pairing_identity};
use chaosforge_core::malliavin::{h_inner, mall_d, mall_dbar, ou_l, ou_lbar, wirtinger_fd};
use chaosforge_core::wick::exact_moment;
use chaosforge_core::{ChaosElement, Complex64, KernelTensor};
use common::{crel_err, random_element, random_kernel, rel_err, rng, sample};

const GRADES: [(usize, usize); 7] = [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1), (1, 2), (2, 2)];

#[test]
fn derivatives_match_wirtinger_differences() {
    let mut r = rng(201);
    for d in 1..=3 {
        for &(m, n) in &GRADES {
            let f = ChaosElement::integral(&random_kernel(m, n, d, &mut r));
            let df = mall_d(&f);
            let dbf = mall_dbar(&f);
            for _ in 0..50 {
                let s = sample(d, &mut r);
                let dv = df.evaluate(&s).unwrap();
                let dbv = dbf.evaluate(&s).unwrap();
                for k in 0..d {
                    let (fz, fzb) = wirtinger_fd(&f, &s, k).unwrap();
                    assert!((fz - dv[k]).norm() < 1e-6, "D ({m},{n}) d={d}");
                    assert!((fzb - dbv[k]).norm() < 1e-6, "Dbar ({m},{n}) d={d}");
                }
            }
        }
    }
}

#[test]
fn dbar_of_conjugate_is_conjugate_of_d() {
    let mut r = rng(202);
    for &(m, n) in &GRADES {
        let f = random_element(&[(m, n), (1, 1)], 2, &mut r);
        let lhs = mall_dbar(&f.conjugate());
        let rhs = mall_d(&f).conjugate();
        for _ in 0..20 {
            let s = sample(2, &mut r);
            let a = lhs.evaluate(&s).unwrap();
            let b = rhs.evaluate(&s).unwrap();
            for k in 0..2 {
                assert!(crel_err(a[k], b[k]) < 1e-12);
            }
        }
    }
}

#[test]
fn ou_operators_are_exact_eigenmaps() {
    let mut r = rng(203);
    for &(m, n) in &GRADES {
        let k = random_kernel(m, n, 2, &mut r);
        let f = ChaosElement::integral(&k);
        assert_eq!(ou_l(&f), f.scale(Complex64::new(m as f64, 0.0)));
        assert_eq!(ou_lbar(&f), f.scale(Complex64::new(n as f64, 0.0)));
    }
}

#[test]
fn h_inner_is_pointwise() {
    let mut r = rng(204);
    let f = random_element(&[(2, 1)], 2, &mut r);
    let g = random_element(&[(1, 2), (1, 0)], 2, &mut r);
    let (u, v) = (mall_d(&f), mall_dbar(&g));
    let ip = h_inner(&u, &v).unwrap();
    for _ in 0..30 {
        let s = sample(2, &mut r);
        let (a, b) = (u.evaluate(&s).unwrap(), v.evaluate(&s).unwrap());
        let want: Complex64 = a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum();
        assert!(crel_err(ip.evaluate(&s).unwrap(), want) < 1e-10);
    }
}

#[test]
fn integration_by_parts() {
    let mut r = rng(205);
    for d in 1..=3 {
        for _ in 0..4 {
            let f = random_element(&[(1, 0), (1, 1), (2, 0), (2, 1)], d, &mut r);
            let df = mall_d(&f);
            for k in 0..d {
                let alpha = [k];
                let zk = ChaosElement::integral(&KernelTensor::basis(d, &alpha, &[]).unwrap());
                let lhs = exact_moment(&[(&zk, false), (&f, true)]).unwrap();
                // ⟨e_k, DF⟩ = conj((DF)_k)
                let rhs = exact_moment(&[(df.component(k), true)]).unwrap();
                assert!((lhs - rhs).norm() < 1e-10, "d={d} k={k}: {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn duality_for_l() {
    let mut r = rng(206);
    for d in 1..=2 {
        for &(m, n) in &GRADES {
            let f = random_element(&[(m, n), (1, 1)], d, &mut r);
            let g = random_element(&[(m, n), (2, 1)], d, &mut r);
            let lhs = exact_moment(&[(&ou_l(&g), false), (&f, true)]).unwrap();
            let pairing = h_inner(&mall_d(&g), &mall_d(&f)).unwrap();
            let rhs = exact_moment(&[(&pairing, false)]).unwrap();
            assert!(
                crel_err(lhs, rhs) < 1e-10,
                "({m},{n}) d={d}: {lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn product_rule_for_conj_times_square() {
    let mut r = rng(207);
    for (d, grades) in [(2usize, &GRADES[..]), (3, &GRADES[..5])] {
        for &(m, n) in grades {
            let f = ChaosElement::integral(&random_kernel(m, n, d, &mut r));
            let fc = f.conjugate();
            let square = f.multiply(&f).unwrap();
            let abs2 = f.multiply(&fc).unwrap();
            let lhs = mall_d(&square.multiply(&fc).unwrap());
            let rhs = mall_d(&f)
                .times(&abs2)
                .unwrap()
                .scale(Complex64::new(2.0, 0.0))
                .add(&mall_d(&fc).times(&square).unwrap())
                .unwrap();
            for _ in 0..50 {
                let s = sample(d, &mut r);
                let a = lhs.evaluate(&s).unwrap();
                let b = rhs.evaluate(&s).unwrap();
                for k in 0..d {
                    assert!(crel_err(a[k], b[k]) < 1e-8, "({m},{n}) d={d}");
                }
            }
        }
    }
}

#[test]
fn derivative_expansion_identities() {
    let mut r = rng(208);
    for d in 1..=3 {
        for &(m, n) in &[(1, 0), (1, 1), (2, 0), (2, 1), (1, 2), (2, 2)] {
            let f = random_kernel(m, n, d, &mut r);
            let (lhs, rhs) = derivative_norm_identity(&f).unwrap();
            assert!(
                rel_err(lhs, rhs) < 1e-9,
                "norm identity ({m},{n}) d={d}: {lhs} vs {rhs}"
            );
            let (lhs, rhs) = derivative_pairing_identity(&f).unwrap();
            assert!(
                rel_err(lhs, rhs) < 1e-9,
                "pairing identity ({m},{n}) d={d}: {lhs} vs {rhs}"
            );
        }
    }
}
