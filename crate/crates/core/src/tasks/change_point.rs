//! Locating the change point in a sequence `ρ₀^{⊗(k−1)} ⊗ ρ₁^{⊗(n−k+1)}`.

use rand::Rng;

use crate::datasets::{
    change_point_ensemble, change_point_unknown_compressed, haar_state, ChangePointCase, Ensemble,
    QuantumState,
};
use crate::discrimination::{
    optimize_block_ops, optimize_min_error, pgm, success_probability, DiscriminationResult,
    SolverOptions,
};
use crate::error::{Error, Result};
use crate::mc::{self, McEstimate};
use crate::numerics::{c, CVector};
use crate::symmetry::invariant_blocks;

use super::TaskReport;

/// `½(1 + √(1 − c²))`: two systems, known pure states with overlap `c`.
pub fn change_point_two_closed_form(overlap: f64) -> f64 {
    0.5 * (1.0 + (1.0 - overlap * overlap).max(0.0).sqrt())
}

/// `|0>` and `c|0> + √(1−c²)|1>` embedded in `C^d`.
pub fn overlap_pair(overlap: f64, d: usize) -> Result<(QuantumState, QuantumState)> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::InvalidInput(format!("overlap must lie in [0, 1], got {overlap}")));
    }
    if d < 2 {
        return Err(Error::InvalidInput(format!("local dimension must be at least 2, got {d}")));
    }
    let mut v0 = CVector::zeros(d);
    v0[0] = c(1.0, 0.0);
    let mut v1 = CVector::zeros(d);
    v1[0] = c(overlap, 0.0);
    v1[1] = c((1.0 - overlap * overlap).max(0.0).sqrt(), 0.0);
    Ok((QuantumState::pure(&v0)?, QuantumState::pure(&v1)?))
}

fn from_dense(report: TaskReport, ens: &Ensemble, opts: &SolverOptions) -> Result<TaskReport> {
    let pgm_success = success_probability(ens, &pgm(ens)?)?;
    let (result, converged) = match optimize_min_error(ens, opts.tol, opts.max_iter) {
        Ok(r) => (r, true),
        Err(Error::NonConvergence { best, .. }) => (*best, false),
        Err(e) => return Err(e),
    };
    Ok(finish(report, &result, converged).extra("pgm_success", pgm_success))
}

fn finish(mut report: TaskReport, result: &DiscriminationResult, converged: bool) -> TaskReport {
    report.numeric = result.success_probability;
    report.certificate_residual = Some(result.certificate_residual);
    report.converged = converged;
    report.extra("iterations", result.iterations as f64)
}

/// Optimal success probability for the given knowledge case.
///
/// Known and known-to-unknown cases are solved on the dense space; the
/// unknown-to-unknown case is unitarily invariant and is solved block by
/// block. For two systems with known states, `analytic` holds the closed
/// form.
pub fn change_point_success(
    n: usize,
    case: &ChangePointCase,
    d: usize,
    opts: &SolverOptions,
) -> Result<TaskReport> {
    let name = match case {
        ChangePointCase::KnownKnown { .. } => "changepoint_known",
        ChangePointCase::KnownUnknown { .. } => "changepoint_semi",
        ChangePointCase::UnknownUnknown => "changepoint_unknown",
    };
    // Validate inputs and dimensions even in the trivial case.
    let report = TaskReport::new(name, 1.0).param("n", n as f64).param("d", d as f64);
    if n == 1 {
        change_point_ensemble(n, case, d)?;
        let mut report = report.extra("pgm_success", 1.0);
        report.certificate_residual = Some(0.0);
        return Ok(report);
    }
    match case {
        ChangePointCase::UnknownUnknown => {
            let blocks = invariant_blocks(n, d)?;
            let prior = 1.0 / n as f64;
            let ops = blocks
                .iter()
                .map(|b| {
                    (1..=n)
                        .map(|k| Ok(change_point_unknown_compressed(n, k, d, &b.basis)?.scale(prior)))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let r = optimize_block_ops(&blocks, ops, opts.tol, opts.max_iter)?;
            let mut report = report
                .extra("pgm_success", r.pgm_success)
                .extra("iterations", r.iterations as f64);
            report.numeric = r.success_probability;
            report.certificate_residual = Some(r.certificate_residual);
            report.converged = r.converged;
            Ok(report)
        }
        ChangePointCase::KnownKnown { rho0, rho1 } => {
            let ens = change_point_ensemble(n, case, d)?;
            let overlap = rho0.matrix().dotc(rho1.matrix()).re.max(0.0).sqrt();
            let mut report = from_dense(report.param("overlap", overlap), &ens, opts)?;
            if n == 2 {
                report.analytic = Some(change_point_two_closed_form(overlap));
            }
            Ok(report)
        }
        ChangePointCase::KnownUnknown { .. } => {
            let ens = change_point_ensemble(n, case, d)?;
            from_dense(report, &ens, opts)
        }
    }
}

/// Optimal known-state success for one Haar-random pair of pure states.
pub fn known_pair_trial<R: Rng + ?Sized>(n: usize, d: usize, opts: &SolverOptions, rng: &mut R) -> Result<f64> {
    let case = ChangePointCase::KnownKnown { rho0: haar_state(d, rng), rho1: haar_state(d, rng) };
    if n == 1 {
        return Ok(1.0);
    }
    let ens = change_point_ensemble(n, &case, d)?;
    match optimize_min_error(&ens, opts.tol, opts.max_iter) {
        Ok(r) => Ok(r.success_probability),
        Err(Error::NonConvergence { best, .. }) => Ok(best.success_probability),
        Err(e) => Err(e),
    }
}

/// Known-state success averaged over Haar-random pairs.
pub fn change_point_known_average(
    n: usize,
    d: usize,
    samples: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<McEstimate> {
    if samples < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 samples, got {samples}")));
    }
    mc::try_estimate(samples, seed, |rng| known_pair_trial(n, d, opts, rng))
}
