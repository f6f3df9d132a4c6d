//! Unsupervised binary clustering of `n` systems drawn from two unknown pure
//! states.

use rayon::prelude::*;

use crate::datasets::{clustering_compressed, clustering_labels};
use crate::discrimination::{optimize_block_ops, SolverOptions};
use crate::error::{Error, Result};
use crate::symmetry::invariant_blocks;

use super::TaskReport;

/// Optimal success probability over the `2^{n−1}` clusterings with a uniform
/// prior, solved block by block on the multiplicity spaces.
pub fn clustering_success(n: usize, d: usize, opts: &SolverOptions) -> Result<TaskReport> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("clustering needs at least 2 systems, got {n}")));
    }
    let blocks = invariant_blocks(n, d)?;
    let labels = clustering_labels(n);
    let prior = 1.0 / labels.len() as f64;
    let ops = blocks
        .iter()
        .map(|b| {
            labels
                .par_iter()
                .map(|x| Ok(clustering_compressed(x, d, &b.basis)?.scale(prior)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let r = optimize_block_ops(&blocks, ops, opts.tol, opts.max_iter)?;
    let mut report = TaskReport::new("cluster", r.success_probability)
        .param("n", n as f64)
        .param("d", d as f64)
        .extra("pgm_success", r.pgm_success)
        .extra("hypotheses", labels.len() as f64)
        .extra("n_times_success", n as f64 * r.success_probability)
        .extra("iterations", r.iterations as f64);
    report.certificate_residual = Some(r.certificate_residual);
    report.converged = r.converged;
    Ok(report)
}
