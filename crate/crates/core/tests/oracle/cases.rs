//! Optimizer runs paired with oracle values on every built-in ensemble with
//! at most three systems.

use uql_core::datasets::{change_point_ensemble, clustering_ensemble, ChangePointCase};
use uql_core::discrimination::{optimize_min_error, pgm, success_probability, SolverOptions};
use uql_core::tasks::{change_point_success, clustering_success, overlap_pair};

use super::{gram_reduction, invariant_reduction, optimum, real_weighted, torus_reduction, RMatrix};

pub struct Case {
    pub name: String,
    pub optimizer: f64,
    pub residual: f64,
    pub pgm: f64,
    pub oracle: f64,
}

fn known_gram(n: usize, c: f64) -> RMatrix {
    // Hypothesis k has the first k−1 systems in |0>; distinct prefixes
    // overlap in |k − k'| positions, each contributing a factor c.
    RMatrix::from_fn(n, n, |i, j| c.powi((i as i32 - j as i32).abs()))
}

pub fn cases() -> Vec<Case> {
    let opts = SolverOptions::default();
    let mut out = Vec::new();
    for (n, d) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
        let ens = clustering_ensemble(n, d).unwrap();
        let task = clustering_success(n, d, &opts).unwrap();
        let dense = optimize_min_error(&ens, opts.tol, opts.max_iter).unwrap();
        assert!((task.numeric - dense.success_probability).abs() < 1e-8);
        out.push(Case {
            name: format!("cluster n={n} d={d}"),
            optimizer: task.numeric,
            residual: task.certificate_residual.unwrap().max(dense.certificate_residual),
            pgm: success_probability(&ens, &pgm(&ens).unwrap()).unwrap(),
            oracle: optimum(&invariant_reduction(&real_weighted(&ens), n, d)),
        });

        let case = ChangePointCase::UnknownUnknown;
        let ens = change_point_ensemble(n, &case, d).unwrap();
        let task = change_point_success(n, &case, d, &opts).unwrap();
        out.push(Case {
            name: format!("changepoint unknown n={n} d={d}"),
            optimizer: task.numeric,
            residual: task.certificate_residual.unwrap(),
            pgm: task.extras["pgm_success"],
            oracle: optimum(&invariant_reduction(&real_weighted(&ens), n, d)),
        });

        let (rho0, _) = overlap_pair(0.0, d).unwrap();
        let case = ChangePointCase::KnownUnknown { rho0 };
        let ens = change_point_ensemble(n, &case, d).unwrap();
        let task = change_point_success(n, &case, d, &opts).unwrap();
        out.push(Case {
            name: format!("changepoint semi n={n} d={d}"),
            optimizer: task.numeric,
            residual: task.certificate_residual.unwrap(),
            pgm: task.extras["pgm_success"],
            oracle: optimum(&torus_reduction(&real_weighted(&ens), n, d)),
        });
    }
    for n in [2, 3] {
        for c in [0.0, 0.5, 0.8, 1.0] {
            let (rho0, rho1) = overlap_pair(c, 2).unwrap();
            let case = ChangePointCase::KnownKnown { rho0, rho1 };
            let task = change_point_success(n, &case, 2, &opts).unwrap();
            out.push(Case {
                name: format!("changepoint known n={n} c={c}"),
                optimizer: task.numeric,
                residual: task.certificate_residual.unwrap(),
                pgm: task.extras["pgm_success"],
                oracle: optimum(&gram_reduction(&known_gram(n, c), &vec![1.0 / n as f64; n])),
            });
        }
    }
    out
}

/// Oracle values recorded from a run of the dual search above.
pub const FROZEN: &[(&str, f64)] = &[
    ("cluster n=2 d=2", 0.625),
    ("changepoint unknown n=2 d=2", 0.625),
    ("changepoint semi n=2 d=2", 0.775231303144333),
    ("cluster n=3 d=2", 0.416666666666667),
    ("changepoint unknown n=3 d=2", 0.540669489309383),
    ("changepoint semi n=3 d=2", 0.708325688603509),
    ("cluster n=2 d=3", 0.666666666666667),
    ("changepoint unknown n=2 d=3", 0.666666666666667),
    ("changepoint semi n=2 d=3", 0.853005664791649),
    ("cluster n=3 d=3", 0.472222222222222),
    ("changepoint unknown n=3 d=3", 0.609781541301399),
    ("changepoint semi n=3 d=3", 0.810611944132047),
    ("changepoint known n=2 c=0", 1.0),
    ("changepoint known n=2 c=0.5", 0.933012701892219),
    ("changepoint known n=2 c=0.8", 0.8),
    ("changepoint known n=2 c=1", 0.5),
    ("changepoint known n=3 c=0", 1.0),
    ("changepoint known n=3 c=0.5", 0.910013840486567),
    ("changepoint known n=3 c=0.8", 0.728909554039826),
    ("changepoint known n=3 c=1", 0.333333333333333),
];

