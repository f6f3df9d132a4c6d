//! Minimum-error discrimination: Helstrom's binary solution, the
//! pretty-good measurement, a fixed-point ascent for the general case and the
//! Holevo–Yuen–Kennedy–Lax optimality certificate.
//!
//! The multi-hypothesis optimizer works on weighted operators `A_i = p_i ρ_i`
//! compressed onto the support of `S = Σ_i A_i` and iterates
//!
//! ```text
//! G = (Σ_j A_j M_j A_j)^{1/2},    M_i <- G^{-1} A_i M_i A_i G^{-1}
//! ```
//!
//! starting from the pretty-good measurement. At a fixed point `G` equals the
//! Lagrange operator `Υ = Σ_i A_i M_i`.

use crate::datasets::Ensemble;
use crate::error::{Error, Result};
use crate::numerics::{
    herm_eig, hermitian_part, hermiticity_deviation, identity, max_abs, max_abs_diff, pinv_sqrt,
    support_function, trace_norm, trace_product_re, CMatrix, PSD_TOL,
};
use crate::symmetry::InvariantBlock;
use rayon::prelude::*;

/// Default convergence tolerance on the success probability.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default iteration cap for [`optimize_min_error`].
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Certificate residual below which a solution counts as optimal.
pub const CERTIFICATE_TOL: f64 = 1e-7;
/// Iterations between certificate evaluations while the ascent is moving.
const RESIDUAL_EVERY: usize = 10;
/// Completeness tolerance for [`Povm::new`].
pub const COMPLETENESS_TOL: f64 = 1e-8;

/// Stopping parameters for the fixed-point ascent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER }
    }
}

/// Positive operators summing to a projector `support`.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<CMatrix>,
    support: CMatrix,
}

impl Povm {
    pub fn new(elements: Vec<CMatrix>, support: CMatrix) -> Result<Self> {
        let dim = support.nrows();
        for e in &elements {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.nrows() });
            }
            let dev = hermiticity_deviation(e);
            if dev > 1e-10 {
                return Err(Error::NotHermitian { deviation: dev });
            }
            let min = herm_eig(e)?.min();
            if min < -PSD_TOL {
                return Err(Error::InvalidInput(format!("POVM element has eigenvalue {min:e}")));
            }
        }
        let povm = Self { elements, support };
        let defect = povm.completeness_defect();
        if defect > COMPLETENESS_TOL {
            return Err(Error::InvalidInput(format!("POVM completeness defect {defect:e}")));
        }
        Ok(povm)
    }

    fn new_unchecked(elements: Vec<CMatrix>, support: CMatrix) -> Self {
        Self { elements, support }
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn support(&self) -> &CMatrix {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `‖Σ_i M_i - support‖_max`.
    pub fn completeness_defect(&self) -> f64 {
        let dim = self.support.nrows();
        let sum = self
            .elements
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, e| acc + e);
        max_abs_diff(&sum, &self.support)
    }

    /// Same POVM with its outcomes reordered: outcome `i` of the result is
    /// outcome `order[i]` of `self`.
    pub fn relabeled(&self, order: &[usize]) -> Povm {
        Povm::new_unchecked(
            order.iter().map(|&i| self.elements[i].clone()).collect(),
            self.support.clone(),
        )
    }
}

#[derive(Debug, Clone)]
pub struct DiscriminationResult {
    pub success_probability: f64,
    pub povm: Povm,
    pub certificate_residual: f64,
    pub iterations: usize,
}

impl DiscriminationResult {
    pub fn error_probability(&self) -> f64 {
        1.0 - self.success_probability
    }

    pub fn certified(&self) -> bool {
        self.certificate_residual <= CERTIFICATE_TOL
    }
}

/// `Σ_i p_i tr(M_i ρ_i)`.
pub fn success_probability(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    if povm.len() != ensemble.len() {
        return Err(Error::DimensionMismatch { expected: ensemble.len(), found: povm.len() });
    }
    if povm.support().nrows() != ensemble.dim() {
        return Err(Error::DimensionMismatch { expected: ensemble.dim(), found: povm.support().nrows() });
    }
    Ok(weighted_success(&ensemble.weighted(), povm.elements()))
}

fn weighted_success(ops: &[CMatrix], elements: &[CMatrix]) -> f64 {
    ops.iter().zip(elements).map(|(a, m)| trace_product_re(a, m)).sum()
}

/// Optimal binary discrimination: success `½(1 + ‖p₀ρ₀ − p₁ρ₁‖₁)`, achieved by
/// the projector onto the non-negative eigenspace of `p₀ρ₀ − p₁ρ₁` (zero
/// eigenvalues go to the first hypothesis).
pub fn helstrom_binary(ensemble: &Ensemble) -> Result<DiscriminationResult> {
    if ensemble.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "Helstrom measurement needs 2 hypotheses, got {}",
            ensemble.len()
        )));
    }
    let ops = ensemble.weighted();
    let gamma = &ops[0] - &ops[1];
    let eig = herm_eig(&gamma)?;
    let scale = eig.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let zero = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let m0 = eig.map(|x| if x >= -zero { 1.0 } else { 0.0 });
    let dim = ensemble.dim();
    let m1 = identity(dim) - &m0;
    let success = 0.5 * (1.0 + eig.values.iter().map(|x| x.abs()).sum::<f64>());
    Ok(DiscriminationResult {
        success_probability: success,
        povm: Povm::new_unchecked(vec![hermitian_part(&m0), hermitian_part(&m1)], identity(dim)),
        certificate_residual: 0.0,
        iterations: 0,
    })
}

/// Square-root measurement `M_i = S^{-1/2} A_i S^{-1/2}` on the support of
/// `S = Σ_i A_i`.
fn pgm_weighted(ops: &[CMatrix]) -> Result<(Vec<CMatrix>, CMatrix)> {
    let dim = ops[0].nrows();
    let s = ops.iter().fold(CMatrix::zeros(dim, dim), |acc, a| acc + a);
    let eig = herm_eig(&hermitian_part(&s))?;
    let inv_sqrt = support_function(&eig, |x| 1.0 / x.sqrt());
    let support = support_function(&eig, |_| 1.0);
    let elements = ops
        .iter()
        .map(|a| hermitian_part(&(&inv_sqrt * a * &inv_sqrt)))
        .collect();
    Ok((elements, support))
}

pub fn pgm(ensemble: &Ensemble) -> Result<Povm> {
    if ensemble.len() < 2 {
        return Err(Error::InvalidInput("PGM needs at least 2 hypotheses".into()));
    }
    let (elements, support) = pgm_weighted(&ensemble.weighted())?;
    Ok(Povm::new_unchecked(elements, support))
}

/// Certificate residual for weighted operators `A_i` and POVM `M_i`:
/// `max(‖Υ − Υ†‖_max, −min_j λ_min(Υ − A_j), 0)` with `Υ = Σ_i A_i M_i`.
fn residual_weighted(ops: &[CMatrix], elements: &[CMatrix]) -> Result<f64> {
    let dim = ops[0].nrows();
    let upsilon = ops
        .iter()
        .zip(elements)
        .fold(CMatrix::zeros(dim, dim), |acc, (a, m)| acc + a * m);
    let asym = max_abs(&(&upsilon - upsilon.adjoint()));
    let herm = hermitian_part(&upsilon);
    let mut worst = 0.0f64;
    for a in ops {
        let min = herm_eig(&hermitian_part(&(&herm - a)))?.min();
        worst = worst.max(-min);
    }
    Ok(asym.max(worst).max(0.0))
}

/// Holevo–Yuen–Kennedy–Lax residual; zero certifies global optimality.
pub fn holevo_residual(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    if povm.len() != ensemble.len() {
        return Err(Error::DimensionMismatch { expected: ensemble.len(), found: povm.len() });
    }
    residual_weighted(&ensemble.weighted(), povm.elements())
}

/// Result of the fixed-point ascent on weighted operators.
#[derive(Debug, Clone)]
pub struct WeightedSolution {
    /// `Σ_i tr(A_i M_i)` of the best iterate.
    pub success: f64,
    /// Success of the starting pretty-good measurement.
    pub pgm_success: f64,
    pub elements: Vec<CMatrix>,
    pub support: CMatrix,
    pub residual: f64,
    pub iterations: usize,
    /// Whether a stopping rule fired before the iteration cap.
    pub converged: bool,
}

/// Fixed-point ascent on weighted operators `A_i` (not necessarily unit
/// trace). The problem is solved on the support of `Σ_i A_i` and lifted back.
pub fn optimize_weighted(ops: &[CMatrix], tol: f64, max_iter: usize) -> Result<WeightedSolution> {
    if ops.is_empty() {
        return Err(Error::InvalidInput("no hypotheses".into()));
    }
    let dim = ops[0].nrows();
    let s = ops.iter().fold(CMatrix::zeros(dim, dim), |acc, a| acc + a);
    let eig = herm_eig(&hermitian_part(&s))?;
    let scale = eig.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let rank = eig
        .values
        .iter()
        .filter(|&&x| x > crate::numerics::PINV_REL_CUTOFF * scale)
        .count();
    if rank == 0 {
        // Every operator vanishes: nothing to gain from measuring.
        let elements = vec![CMatrix::zeros(dim, dim); ops.len()];
        return Ok(WeightedSolution {
            success: 0.0,
            pgm_success: 0.0,
            elements,
            support: CMatrix::zeros(dim, dim),
            residual: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    let basis = eig.vectors.columns(0, rank).into_owned();
    let compressed: Vec<CMatrix> = ops
        .iter()
        .map(|a| hermitian_part(&(basis.adjoint() * a * &basis)))
        .collect();

    let (mut current, _) = pgm_weighted(&compressed)?;
    let mut success = weighted_success(&compressed, &current);
    let pgm_success = success;
    let mut best = (success, current.clone());
    let mut residual = residual_weighted(&compressed, &current)?;
    let mut best_residual = residual;
    let mut iterations = 0;
    let mut converged = residual < tol;

    while !converged && iterations < max_iter {
        iterations += 1;
        let products: Vec<CMatrix> = compressed
            .iter()
            .zip(&current)
            .map(|(a, m)| a * m * a)
            .collect();
        let g2 = products
            .iter()
            .fold(CMatrix::zeros(rank, rank), |acc, b| acc + b);
        let g_inv = pinv_sqrt(&hermitian_part(&g2))?;
        current = products
            .iter()
            .map(|b| hermitian_part(&(&g_inv * b * &g_inv)))
            .collect();
        let next = weighted_success(&compressed, &current);
        let change = (next - success).abs();
        success = next;
        // The certificate costs one eigendecomposition per hypothesis, so it
        // is evaluated periodically and whenever the ascent stalls.
        let check = change < tol || iterations % RESIDUAL_EVERY == 0 || iterations == max_iter;
        if check {
            residual = residual_weighted(&compressed, &current)?;
        }
        if success >= best.0 {
            best = (success, current.clone());
            best_residual = if check { residual } else { f64::NAN };
        }
        if check && (residual < tol || (change < tol && residual <= CERTIFICATE_TOL)) {
            converged = true;
        }
    }

    if best_residual.is_nan() {
        best_residual = residual_weighted(&compressed, &best.1)?;
    }
    let lift = |m: &CMatrix| hermitian_part(&(&basis * m * basis.adjoint()));
    Ok(WeightedSolution {
        success: best.0,
        pgm_success,
        elements: best.1.iter().map(lift).collect(),
        support: &basis * basis.adjoint(),
        residual: best_residual,
        iterations,
        converged,
    })
}

/// General minimum-error discrimination by fixed-point ascent from the PGM.
///
/// Returns [`Error::NonConvergence`] with the best iterate attached when
/// neither stopping rule fires within `max_iter` iterations.
pub fn optimize_min_error(ensemble: &Ensemble, tol: f64, max_iter: usize) -> Result<DiscriminationResult> {
    if ensemble.len() < 2 {
        return Err(Error::InvalidInput("discrimination needs at least 2 hypotheses".into()));
    }
    let sol = optimize_weighted(&ensemble.weighted(), tol, max_iter)?;
    let result = DiscriminationResult {
        success_probability: sol.success,
        povm: Povm::new_unchecked(sol.elements, sol.support),
        certificate_residual: sol.residual,
        iterations: sol.iterations,
    };
    if !sol.converged {
        return Err(Error::NonConvergence { iterations: sol.iterations, best: Box::new(result) });
    }
    Ok(result)
}

/// Per-block summary of a block-reduced optimization.
#[derive(Debug, Clone)]
pub struct BlockOutcome {
    pub label: crate::symmetry::Partition,
    pub unitary_dim: u128,
    pub multiplicity: usize,
    /// Success contributed by the block, already weighted by `unitary_dim`.
    pub success: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Optimum of an ensemble of `U^{⊗n}`-invariant states, computed block by
/// block on the multiplicity spaces.
#[derive(Debug, Clone)]
pub struct InvariantDiscrimination {
    pub success_probability: f64,
    pub pgm_success: f64,
    pub certificate_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub blocks: Vec<BlockOutcome>,
}

impl InvariantDiscrimination {
    pub fn certified(&self) -> bool {
        self.certificate_residual <= CERTIFICATE_TOL
    }
}

/// Minimum-error discrimination of unitarily invariant hypotheses.
///
/// Each state is `⊕_y 1_{U(y)} ⊗ ξ_y`; an invariant POVM is optimal, so the
/// problem splits into independent problems on the multiplicity spaces, and
/// the certificate of the full problem is the worst block certificate.
pub fn optimize_invariant(
    ensemble: &Ensemble,
    blocks: &[InvariantBlock],
    tol: f64,
    max_iter: usize,
) -> Result<InvariantDiscrimination> {
    for block in blocks {
        if block.basis.nrows() != ensemble.dim() {
            return Err(Error::DimensionMismatch { expected: ensemble.dim(), found: block.basis.nrows() });
        }
    }
    let ops = ensemble.weighted();
    let local = blocks
        .iter()
        .map(|block| ops.par_iter().map(|a| block.compress(a)).collect())
        .collect();
    optimize_block_ops(blocks, local, tol, max_iter)
}

/// Block-reduced optimization from precomputed compressed operators:
/// `ops[b][i]` is `p_i W_b† ρ_i W_b` for block `b`.
pub fn optimize_block_ops(
    blocks: &[InvariantBlock],
    ops: Vec<Vec<CMatrix>>,
    tol: f64,
    max_iter: usize,
) -> Result<InvariantDiscrimination> {
    if ops.len() != blocks.len() {
        return Err(Error::DimensionMismatch { expected: blocks.len(), found: ops.len() });
    }
    let solutions = blocks
        .par_iter()
        .zip(ops)
        .map(|(block, local)| {
            let local: Vec<CMatrix> = local.iter().map(hermitian_part).collect();
            optimize_weighted(&local, tol, max_iter).map(|sol| (block, sol))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = InvariantDiscrimination {
        success_probability: 0.0,
        pgm_success: 0.0,
        certificate_residual: 0.0,
        iterations: 0,
        converged: true,
        blocks: Vec::with_capacity(blocks.len()),
    };
    for (block, sol) in solutions {
        let weight = block.unitary_dim as f64;
        out.success_probability += weight * sol.success;
        out.pgm_success += weight * sol.pgm_success;
        out.certificate_residual = out.certificate_residual.max(sol.residual);
        out.iterations = out.iterations.max(sol.iterations);
        out.converged &= sol.converged;
        out.blocks.push(BlockOutcome {
            label: block.label.clone(),
            unitary_dim: block.unitary_dim,
            multiplicity: block.basis.ncols(),
            success: weight * sol.success,
            residual: sol.residual,
            iterations: sol.iterations,
        });
    }
    Ok(out)
}

/// `‖p₀ρ₀ − p₁ρ₁‖₁` for a binary ensemble.
pub fn weighted_trace_distance(ensemble: &Ensemble) -> Result<f64> {
    if ensemble.len() != 2 {
        return Err(Error::InvalidInput("need exactly 2 hypotheses".into()));
    }
    let ops = ensemble.weighted();
    trace_norm(&(&ops[0] - &ops[1]))
}
