//! Split (estimate-then-discriminate) versus global strategies for one qubit
//! per register.

use rand::Rng;

use crate::datasets::haar_vector;
use crate::error::{Error, Result};
use crate::mc;
use crate::numerics::CVector;

use super::programmable::programmable_closed_form;
use super::TaskReport;

fn bloch(v: &CVector) -> [f64; 3] {
    let (a, b) = (v[0], v[1]);
    let ab = a.conj() * b;
    [2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()]
}

fn dot(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

/// Error of the split strategy for fixed templates `r0`, `r1` and estimates
/// `ea`, `ec` (Bloch vectors), averaged over which template the data copies.
///
/// With equal priors the Helstrom measurement for the pure estimates is the
/// projector onto `(1 + n·σ)/2`, `n ∝ ea − ec`; a tie assigns everything to
/// the first template.
pub fn split_error(r0: &[f64; 3], r1: &[f64; 3], ea: &[f64; 3], ec: &[f64; 3]) -> f64 {
    let diff = [ea[0] - ec[0], ea[1] - ec[1], ea[2] - ec[2]];
    let norm = dot(&diff, &diff).sqrt();
    if norm == 0.0 {
        return 0.5;
    }
    let n = [diff[0] / norm, diff[1] / norm, diff[2] / norm];
    // Data from r0 is wrong with probability (1 − n·r0)/2, from r1 with (1 + n·r1)/2.
    0.5 + 0.25 * (dot(&n, r1) - dot(&n, r0))
}

/// One importance-weighted draw: Haar templates and Haar estimates,
/// reweighted by the covariant-POVM densities `2u_A · 2u_C`.
pub fn split_trial<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let psi0 = haar_vector(2, rng);
    let psi1 = haar_vector(2, rng);
    let phi_a = haar_vector(2, rng);
    let phi_c = haar_vector(2, rng);
    let w = 2.0 * phi_a.dotc(&psi0).norm_sqr() * 2.0 * phi_c.dotc(&psi1).norm_sqr();
    w * split_error(&bloch(&psi0), &bloch(&psi1), &bloch(&phi_a), &bloch(&phi_c))
}

/// Monte Carlo error of the split strategy against the global optimum.
///
/// `numeric` is the split error; extras carry the global reference, the gap
/// and its significance in standard errors.
pub fn split_vs_global(samples: usize, seed: u64) -> Result<TaskReport> {
    if samples < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 samples, got {samples}")));
    }
    let est = mc::estimate(samples, seed, split_trial);
    let global = programmable_closed_form();
    let gap = est.mean - global;
    let mut report = TaskReport::new("split_vs_global", est.mean)
        .param("samples", samples as f64)
        .extra("global", global)
        .extra("gap", gap)
        .extra("gap_sigmas", gap / est.std_error);
    report.monte_carlo = Some(est);
    Ok(report)
}
