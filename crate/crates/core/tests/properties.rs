use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use uql_core::datasets::{
    change_point_ensemble, clustering_ensemble, haar_state, haar_unitary, random_mixed_state,
    ChangePointCase, Ensemble,
};
use uql_core::discrimination::{optimize_min_error, pgm, success_probability, Povm, SolverOptions};
use uql_core::numerics::{
    herm_eig, kron_power, max_abs_diff, partial_trace, trace, trace_norm, CMatrix, SubsystemShape,
};
use uql_core::symmetry::{dim_sn, dim_sud, partitions, qubit_schur_blocks, sym_projector};
use uql_core::tasks::{
    change_point_success, clustering_success, estimation_fidelity_closed, estimation_fidelity_exact,
    overlap_block_distribution_dense,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_hermitian(dim: usize, r: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| Complex64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5));
    (&g + g.adjoint()).scale(0.5)
}

fn shapes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=4, 1..=4).prop_filter("at most 256", |v| v.iter().product::<usize>() <= 256)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn partial_trace_preserves_trace(dims in shapes(), seed in any::<u64>(), mask in any::<u8>()) {
        let shape = SubsystemShape::new(dims.clone()).unwrap();
        let m = random_hermitian(shape.total_dim(), &mut rng(seed));
        let keep: Vec<usize> = (0..dims.len()).filter(|i| mask >> i & 1 == 1).collect();
        let reduced = partial_trace(&m, &shape, &keep).unwrap();
        prop_assert!((trace(&reduced) - trace(&m)).norm() <= 1e-10);
    }

    #[test]
    fn eigen_reconstruction(dim in 1usize..=64, seed in any::<u64>()) {
        let m = random_hermitian(dim, &mut rng(seed));
        let eig = herm_eig(&m).unwrap();
        prop_assert!(max_abs_diff(&eig.reconstruct(), &m) <= 1e-9);
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn trace_norm_is_unitarily_invariant(dim in 2usize..=16, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_hermitian(dim, &mut r);
        let u = haar_unitary(dim, &mut r);
        let b = &u * &a * u.adjoint();
        prop_assert!((trace_norm(&a).unwrap() - trace_norm(&b).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn symmetric_projector_commutes_with_rigid_unitaries(n in 1usize..=5, d in 2usize..=3, seed in any::<u64>()) {
        let p = sym_projector(n, d).unwrap();
        prop_assert!(max_abs_diff(&(&p * &p), &p) <= 1e-9);
        let u = kron_power(&haar_unitary(d, &mut rng(seed)), n);
        prop_assert!(max_abs_diff(&(&p * &u), &(&u * &p)) <= 1e-9);
    }

    #[test]
    fn success_is_affine_in_priors(seed in any::<u64>(), lambda in 0.0f64..=1.0, k in 2usize..=4) {
        let mut r = rng(seed);
        let states: Vec<_> = (0..k).map(|_| random_mixed_state(2, &mut r)).collect();
        let p: Vec<f64> = { let w: Vec<f64> = (0..k).map(|_| r.random::<f64>() + 0.1).collect(); let s: f64 = w.iter().sum(); w.iter().map(|x| x / s).collect() };
        let q: Vec<f64> = { let w: Vec<f64> = (0..k).map(|_| r.random::<f64>() + 0.1).collect(); let s: f64 = w.iter().sum(); w.iter().map(|x| x / s).collect() };
        let mix: Vec<f64> = p.iter().zip(&q).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        let povm = pgm(&Ensemble::uniform(states.clone()).unwrap()).unwrap();
        let s = |pr: &[f64]| success_probability(&Ensemble::new(pr.to_vec(), states.clone()).unwrap(), &povm).unwrap();
        prop_assert!((s(&mix) - (lambda * s(&p) + (1.0 - lambda) * s(&q))).abs() <= 1e-12);
    }

    #[test]
    fn success_is_invariant_under_relabeling(seed in any::<u64>(), k in 2usize..=5) {
        let mut r = rng(seed);
        let states: Vec<_> = (0..k).map(|_| random_mixed_state(3, &mut r)).collect();
        let ens = Ensemble::uniform(states.clone()).unwrap();
        let povm = pgm(&ens).unwrap();
        let mut order: Vec<usize> = (0..k).collect();
        for i in (1..k).rev() {
            order.swap(i, r.random_range(0..=i));
        }
        let permuted = Ensemble::uniform(order.iter().map(|&i| states[i].clone()).collect()).unwrap();
        let a = success_probability(&ens, &povm).unwrap();
        let b = success_probability(&permuted, &povm.relabeled(&order)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn pgm_never_beats_the_optimizer(seed in any::<u64>(), k in 2usize..=4, d in 2usize..=3) {
        let mut r = rng(seed);
        let states: Vec<_> = (0..k).map(|_| random_mixed_state(d, &mut r)).collect();
        let ens = Ensemble::uniform(states).unwrap();
        let opt = optimize_min_error(&ens, 1e-10, 10_000).unwrap();
        let p = success_probability(&ens, &pgm(&ens).unwrap()).unwrap();
        prop_assert!(p <= opt.success_probability + 1e-10);
        prop_assert!(opt.certificate_residual <= 1e-7);
    }
}

#[test]
fn schur_weyl_dimension_identity() {
    for n in 0..=8 {
        for d in 1..=4 {
            let total: u128 = partitions(n, d).iter().map(|y| dim_sud(y, d) * dim_sn(y)).sum();
            assert_eq!(total, (d as u128).pow(n as u32), "n={n} d={d}");
        }
    }
}

#[test]
fn schur_blocks_reduce_rigid_rotations() {
    let mut r = rng(17);
    for n in 2..=5 {
        let u = kron_power(&haar_unitary(2, &mut r), n);
        let blocks = qubit_schur_blocks(n).unwrap();
        for a in &blocks {
            let reference = a.isometry.adjoint() * &u * &a.isometry;
            for b in &blocks {
                let m = a.isometry.adjoint() * &u * &b.isometry;
                if a.twice_spin != b.twice_spin || a.path != b.path {
                    assert!(m.iter().all(|z| z.norm() <= 1e-9), "n={n}: {:?} vs {:?}", a.path, b.path);
                } else {
                    assert!(max_abs_diff(&m, &reference) <= 1e-12);
                }
            }
            // Same J on a different path: identical representation matrix.
            for b in blocks.iter().filter(|b| b.twice_spin == a.twice_spin) {
                let other = b.isometry.adjoint() * &u * &b.isometry;
                assert!(max_abs_diff(&other, &reference) <= 1e-9);
            }
        }
    }
}

/// Entrywise comparison of a sample mean of matrices with a target.
fn assert_mean_close(samples: &[CMatrix], target: &CMatrix, sigmas: f64) {
    let count = samples.len() as f64;
    let dim = target.nrows();
    for i in 0..dim {
        for j in 0..dim {
            for part in [|z: Complex64| z.re, |z: Complex64| z.im] {
                let xs: Vec<f64> = samples.iter().map(|m| part(m[(i, j)])).collect();
                let mean = xs.iter().sum::<f64>() / count;
                let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1.0);
                let se = (var / count).sqrt();
                let dev = (mean - part(target[(i, j)])).abs();
                assert!(dev <= sigmas * se + 1e-12, "entry ({i},{j}): deviation {dev:e}, se {se:e}");
            }
        }
    }
}

#[test]
fn haar_averages_match_effective_states() {
    let mut r = rng(2024);
    let samples = 100_000;
    for n in 1..=3 {
        let draws: Vec<CMatrix> = (0..samples).map(|_| kron_power(haar_state(2, &mut r).matrix(), n)).collect();
        let target = sym_projector(n, 2).unwrap().unscale((n + 1) as f64);
        assert_mean_close(&draws, &target, 3.0);
    }
    // Programmable: ψ0 ⊗ ψ0 ⊗ ψ1 averages to P_sym ⊗ 1 / 6.
    let draws: Vec<CMatrix> = (0..samples)
        .map(|_| {
            let a = haar_state(2, &mut r);
            let b = haar_state(2, &mut r);
            uql_core::numerics::kron(&kron_power(a.matrix(), 2), b.matrix())
        })
        .collect();
    let target = uql_core::datasets::programmable_effective(1, 1, 1, uql_core::datasets::ProgramHypothesis::A, 2).unwrap();
    assert_mean_close(&draws, target.matrix(), 3.0);
    // Clustering labelling 010.
    let draws: Vec<CMatrix> = (0..samples)
        .map(|_| {
            let a = haar_state(2, &mut r);
            let b = haar_state(2, &mut r);
            uql_core::numerics::kron_all([a.matrix(), b.matrix(), a.matrix()])
        })
        .collect();
    let target = uql_core::datasets::clustering_state(&[0, 1, 0], 2).unwrap();
    assert_mean_close(&draws, target.matrix(), 3.0);
}

#[test]
fn optimum_is_invariant_under_rigid_unitaries() {
    let opts = SolverOptions::default();
    let mut r = rng(99);
    let ensembles = [
        ("cluster", 3, 2, clustering_ensemble(3, 2).unwrap()),
        ("cluster", 3, 3, clustering_ensemble(3, 3).unwrap()),
        ("changepoint", 3, 2, change_point_ensemble(3, &ChangePointCase::UnknownUnknown, 2).unwrap()),
    ];
    for (name, n, d, ens) in ensembles {
        let base = optimize_min_error(&ens, opts.tol, opts.max_iter).unwrap().success_probability;
        let task = if name == "cluster" {
            clustering_success(n, d, &opts).unwrap().numeric
        } else {
            change_point_success(n, &ChangePointCase::UnknownUnknown, d, &opts).unwrap().numeric
        };
        assert!((task - base).abs() <= 1e-8);
        for _ in 0..10 {
            let w = kron_power(&haar_unitary(d, &mut r), n);
            let moved = ens.conjugated(&w);
            let v = optimize_min_error(&moved, opts.tol, opts.max_iter).unwrap().success_probability;
            assert!((v - base).abs() <= 1e-8, "{name} n={n} d={d}: {v} vs {base}");
        }
    }
}

#[test]
fn overlap_distribution_is_universal() {
    let mut r = rng(5);
    for (n1, n2) in [(1, 1), (2, 3), (3, 3)] {
        let psi = uql_core::datasets::haar_vector(2, &mut r);
        let phi = uql_core::datasets::haar_vector(2, &mut r);
        let base = overlap_block_distribution_dense(&psi, &phi, n1, n2).unwrap();
        for _ in 0..6 {
            let u = haar_unitary(2, &mut r);
            let moved = overlap_block_distribution_dense(&(&u * &psi), &(&u * &phi), n1, n2).unwrap();
            for (tj, p) in &base {
                assert!((moved[tj] - p).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn estimation_exact_matches_closed_form_everywhere() {
    for d in 2usize..=32 {
        let mut n = 0;
        while (d as u128).pow(n as u32 + 1) <= 1024 {
            let exact = estimation_fidelity_exact(n, d).unwrap();
            assert!((exact - estimation_fidelity_closed(n, d)).abs() <= 1e-12, "n={n} d={d}");
            n += 1;
        }
    }
}

#[test]
fn povm_construction_checks_completeness() {
    let half = DMatrix::<Complex64>::identity(2, 2).scale(0.5);
    assert!(Povm::new(vec![half.clone(), half], CMatrix::identity(2, 2)).is_ok());
}
