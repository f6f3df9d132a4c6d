//! Dispatch of resolved requests to the core library.

use std::time::Instant;

use uql_core::datasets::{random_mixed_state, ChangePointCase, QuantumState};
use uql_core::discrimination::SolverOptions;
use uql_core::mc::chunk_rng;
use uql_core::numerics::{c, CVector};
use uql_core::symmetry::{dim_sn, dim_sud, partitions, sym_dim};
use uql_core::tasks::{
    change_point_known_average, change_point_success, clustering_success, estimation_fidelity_closed,
    estimation_fidelity_exact, estimation_fidelity_mc, hs_distance_sq, hs_swap_estimate, overlap_block_distribution,
    overlap_mle, overlap_pair, programmable_block_analysis, programmable_error, simulate_overlap_histogram,
};
use uql_core::{Error, TaskReport};

use crate::args::{CaseArg, Request, Task};
use crate::record::ExperimentRecord;

/// Why a run failed.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Bad input; no record is produced.
    Usage(String),
    /// The computation itself failed; the record carries the message.
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::EigenFailure => Failure::Numerical(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Runs the request. On numerical failure the record is still returned with
/// `error` set.
pub fn run(req: &Request) -> Result<ExperimentRecord, Failure> {
    let start = Instant::now();
    let mut record = ExperimentRecord::new(task_name(&req.task), req.seed);
    let outcome = fill(&req.task, req.seed, &mut record);
    record.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok(()) => {}
        Err(Failure::Numerical(msg)) => record.error = Some(msg),
        Err(usage) => return Err(usage),
    }
    let bad = record.non_finite();
    if !bad.is_empty() {
        let msg = format!("non-finite results: {}", bad.join(", "));
        record.results.retain(|_, v| v.is_finite());
        record.error = Some(msg);
    }
    Ok(record)
}

fn task_name(task: &Task) -> &'static str {
    match task {
        Task::Dims { .. } => "dims",
        Task::Estimate { .. } => "estimate",
        Task::Programmable { .. } => "programmable",
        Task::Changepoint { .. } => "changepoint",
        Task::Cluster { .. } => "cluster",
        Task::Overlap { .. } => "overlap",
        Task::Distance { .. } => "distance",
    }
}

/// Copies a task report into the record, renaming `numeric` to `primary`.
fn absorb(record: &mut ExperimentRecord, report: &TaskReport, primary: &str, prefix: &str) -> Result<(), Failure> {
    for (k, v) in report.values() {
        let key = if k == "numeric" { primary.to_string() } else { k };
        record.result(&format!("{prefix}{key}"), v);
    }
    if !report.converged {
        return Err(Failure::Numerical("optimizer did not converge within the iteration limit".into()));
    }
    Ok(())
}

fn fill(task: &Task, seed: u64, record: &mut ExperimentRecord) -> Result<(), Failure> {
    match *task {
        Task::Dims { n, d } => {
            record.param("n", n);
            record.param("d", d);
            let ys = partitions(n, d);
            let mut total = 0u128;
            for y in &ys {
                let (su, sn) = (dim_sud(y, d), dim_sn(y));
                total += su * sn;
                let label = y.parts().iter().map(|p| p.to_string()).collect::<Vec<_>>().join("_");
                record.result(&format!("irrep.{label}.dim_sud"), su as f64);
                record.result(&format!("irrep.{label}.dim_sn"), sn as f64);
            }
            record.result("hilbert_dim", (d as f64).powi(n as i32));
            record.result("schur_weyl_sum", total as f64);
            record.result("sym_dim", sym_dim(n, d) as f64);
            record.result("irreps", ys.len() as f64);
        }
        Task::Estimate { n, d, samples } => {
            record.param("n", n);
            record.param("d", d);
            let closed = estimation_fidelity_closed(n, d);
            record.result("closed", closed);
            if (d as u128).pow(n as u32 + 1) <= crate::args::MAX_DIM {
                let exact = estimation_fidelity_exact(n, d)?;
                record.result("exact", exact);
                record.result("mismatch", (exact - closed).abs());
            }
            if let Some(samples) = samples {
                record.param("samples", samples);
                let mc = estimation_fidelity_mc(n, d, samples, seed)?;
                record.result("mc_mean", mc.mean);
                record.result("mc_std_error", mc.std_error);
                record.result("mc_sigmas", mc.sigmas_from(closed));
            }
        }
        Task::Programmable { n1, m, n3, d } => {
            for (k, v) in [("n1", n1), ("m", m), ("n3", n3), ("d", d)] {
                record.param(k, v);
            }
            let report = programmable_error(n1, m, n3, d)?;
            absorb(record, &report, "error", "")?;
            if (n1, m, n3, d) == (1, 1, 1, 2) {
                let blocks = programmable_block_analysis()?;
                absorb(record, &blocks, "error", "blocks.")?;
            }
        }
        Task::Changepoint { n, d, case, overlap, samples, tol, max_iter } => {
            record.param("n", n);
            record.param("d", d);
            record.param("case", case.name());
            record.param("tol", tol);
            record.param("max_iter", max_iter);
            let opts = SolverOptions { tol, max_iter };
            let case = match (case, overlap) {
                (CaseArg::Known, Some(c)) => {
                    record.param("overlap", c);
                    let (rho0, rho1) = overlap_pair(c, d)?;
                    ChangePointCase::KnownKnown { rho0, rho1 }
                }
                (CaseArg::Semi, _) => ChangePointCase::KnownUnknown { rho0: basis_state(d)? },
                _ => ChangePointCase::UnknownUnknown,
            };
            let report = change_point_success(n, &case, d, &opts)?;
            // Attach the Haar-averaged reference before reporting failure.
            if let Some(samples) = samples {
                record.param("samples", samples);
                let avg = change_point_known_average(n, d, samples, seed, &opts)?;
                record.result("known_average.mean", avg.mean);
                record.result("known_average.std_error", avg.std_error);
            }
            absorb(record, &report, "success", "")?;
        }
        Task::Cluster { n, d, tol, max_iter } => {
            record.param("n", n);
            record.param("d", d);
            record.param("tol", tol);
            record.param("max_iter", max_iter);
            let report = clustering_success(n, d, &SolverOptions { tol, max_iter })?;
            absorb(record, &report, "success", "")?;
        }
        Task::Overlap { n1, n2, overlap, shots } => {
            record.param("n1", n1);
            record.param("n2", n2);
            record.param("overlap", overlap);
            for (tj, p) in overlap_block_distribution(n1, n2, overlap)? {
                record.result(&format!("prob.2j_{tj}"), p);
            }
            if let Some(shots) = shots {
                record.param("samples", shots);
                let hist = simulate_overlap_histogram(n1, n2, overlap, shots, seed)?;
                for (tj, count) in &hist {
                    record.result(&format!("counts.2j_{tj}"), *count as f64);
                }
                record.result("mle", overlap_mle(&hist, n1, n2)?);
            }
        }
        Task::Distance { d, pairs } => {
            record.param("d", d);
            record.param("samples", pairs);
            if pairs == 0 {
                return Err(Failure::Usage("--samples must be positive".into()));
            }
            let mut rng = chunk_rng(seed, 0);
            let (mut sum, mut worst) = (0.0, 0.0f64);
            for i in 0..pairs {
                let a = random_mixed_state(d, &mut rng);
                let b = random_mixed_state(d, &mut rng);
                let exact = hs_distance_sq(&a, &b)?;
                let swap = hs_swap_estimate(&a, &b)?;
                if i == 0 {
                    record.result("hs_distance_sq", exact);
                    record.result("swap_estimate", swap);
                }
                sum += exact;
                worst = worst.max((exact - swap).abs());
            }
            record.result("mean_hs_distance_sq", sum / pairs as f64);
            record.result("max_deviation", worst);
        }
    }
    Ok(())
}

fn basis_state(d: usize) -> Result<QuantumState, Error> {
    let mut v = CVector::zeros(d);
    v[0] = c(1.0, 0.0);
    QuantumState::pure(&v)
}
