use chaosforge_core::families::{gen_diagonal, gen_gaussian};
use chaosforge_harness::formats::KernelFile;
use chaosforge_harness::sweep::{sweep_kernels, sweep_theorem, Family, SequenceSpec};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(family: Family, m: usize, n: usize, dims: &[usize]) -> SequenceSpec {
    SequenceSpec {
        family,
        m,
        n,
        dims: dims.to_vec(),
        seed: 17,
        count: None,
        mc_samples: None,
    }
}

#[test]
fn diagonal_gap_scales_as_inverse_dimension() {
    for (m, n) in [(1, 1), (2, 0), (2, 1), (0, 2), (2, 2)] {
        let dims: &[usize] = if m + n > 3 { &[1, 2, 3] } else { &[1, 2, 4, 8] };
        let res = sweep_theorem(&spec(Family::Diagonal, m, n, dims)).unwrap();
        assert!(res.flags.gap_times_dim_constant, "({m},{n})");
        assert!(res.flags.gap_decreasing && res.flags.plain_norms_decreasing);
        assert!(res.flags.symmetrized_dominated && res.flags.gap_within_bound);
        for row in &res.rows {
            for e in &row.profile {
                for x in [e.ff, e.fh].into_iter().flatten() {
                    assert!((x * x - 1.0 / row.d as f64).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn repeated_kernel_shows_no_decay() {
    let f = gen_diagonal(1, 1, 3).unwrap();
    let res = sweep_kernels(&[f.clone(), f.clone(), f], 0, None).unwrap();
    assert!(!res.flags.plain_norms_decreasing);
    assert!(!res.flags.symmetrized_norms_decreasing);
    assert!(!res.flags.gap_decreasing);
    assert!(res.flags.symmetrized_dominated);
}

#[test]
fn random_kernels_respect_domination_and_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 0)] {
        let ks: Vec<_> = (1..=3)
            .map(|d| gen_gaussian(m, n, d, &mut rng).unwrap())
            .collect();
        let res = sweep_kernels(&ks, 0, None).unwrap();
        assert!(res.flags.symmetrized_dominated, "({m},{n})");
        assert!(res.flags.gap_within_bound, "({m},{n})");
        assert!(res.rows.iter().all(|r| r.gap.is_finite() && r.gap >= -1e-9));
    }
}

#[test]
fn random_sparse_family_decays() {
    let res = sweep_theorem(&spec(Family::RandomSparse, 1, 1, &[1, 4, 16])).unwrap();
    assert!(res
        .rows
        .iter()
        .all(|r| r.gap <= r.gap_bound * (1.0 + 1e-9) + 1e-9));
    assert!(res.rows[2].gap < res.rows[0].gap);
}

#[test]
fn file_family_reads_sequences() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.json");
    let ks: Vec<_> = [1, 2, 4]
        .iter()
        .map(|&d| KernelFile::from_kernel(&gen_diagonal(1, 1, d).unwrap()))
        .collect();
    std::fs::write(&path, serde_json::to_string(&ks).unwrap()).unwrap();
    let from_file = sweep_theorem(&spec(Family::File(path.clone()), 1, 1, &[])).unwrap();
    let generated = sweep_theorem(&spec(Family::Diagonal, 1, 1, &[1, 2, 4])).unwrap();
    assert_eq!(from_file.rows, generated.rows);
    assert!(sweep_theorem(&spec(Family::File(path), 2, 0, &[])).is_err());
}

#[test]
fn optional_monte_carlo_column() {
    let mut s = spec(Family::Diagonal, 1, 1, &[1, 2]);
    s.mc_samples = Some(20_000);
    let res = sweep_theorem(&s).unwrap();
    for row in &res.rows {
        let mc = row.mc_fourth_moment.unwrap();
        assert!(mc.z_score() < 5.0, "{mc:?}");
    }
    assert_eq!(res, sweep_theorem(&s).unwrap());
}
