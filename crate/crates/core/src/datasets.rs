//! Structured quantum datasets and their Haar-averaged effective states.
//!
//! Unknown pure templates are averaged out with Schur's lemma:
//! `∫dψ ψ^{⊗n} = P_sym^{(n)} / binom(n+d-1, n)`, so every effective state is a
//! tensor product of normalized symmetric projectors and known states, possibly
//! with its registers permuted.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{
    c, herm_eig, hermiticity_deviation, kron, kron_apply, kron_power, max_abs_diff, projector, trace,
    trace_product_re, CMatrix, CVector, SubsystemShape, HERMITIAN_TOL, PSD_TOL,
};
use crate::symmetry::{
    conjugate_by_permutation, permutation_index_map, sym_dim, sym_projector, Permutation,
};

/// Density matrix together with the local dimensions of its subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    matrix: CMatrix,
    shape: SubsystemShape,
}

impl QuantumState {
    pub fn new(matrix: CMatrix, shape: SubsystemShape) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        if matrix.nrows() != shape.total_dim() {
            return Err(Error::DimensionMismatch { expected: shape.total_dim(), found: matrix.nrows() });
        }
        let deviation = hermiticity_deviation(&matrix);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix, shape })
    }

    /// Single-system state of dimension `matrix.nrows()`.
    pub fn single(matrix: CMatrix) -> Result<Self> {
        let shape = SubsystemShape::new(vec![matrix.nrows()])?;
        Self::new(matrix, shape)
    }

    /// `|v><v|` for a normalized single-system vector.
    pub fn pure(v: &CVector) -> Result<Self> {
        Self::single(projector(&v.normalize()))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        trace(&self.matrix).re
    }

    pub fn purity(&self) -> f64 {
        trace_product_re(&self.matrix, &self.matrix)
    }

    pub fn tensor(&self, other: &QuantumState) -> QuantumState {
        QuantumState {
            matrix: kron(&self.matrix, &other.matrix),
            shape: self.shape.concat(&other.shape),
        }
    }

    pub fn tensor_power(&self, n: usize) -> QuantumState {
        let dims = self.shape.dims().repeat(n);
        QuantumState {
            matrix: kron_power(&self.matrix, n),
            shape: SubsystemShape::new(dims).expect("dims of a valid state"),
        }
    }

    /// `W ρ W†` for a unitary on the whole space.
    pub fn conjugated(&self, w: &CMatrix) -> QuantumState {
        QuantumState {
            matrix: w * &self.matrix * w.adjoint(),
            shape: self.shape.clone(),
        }
    }

    /// Unit trace and positive semi-definite within tolerance.
    pub fn validate_density(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > PSD_TOL {
            return Err(Error::InvalidInput(format!("state trace is {tr}, expected 1")));
        }
        let min = herm_eig(&self.matrix)?.min();
        if min < -PSD_TOL {
            return Err(Error::InvalidInput(format!("state has negative eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// Normalized complex-Gaussian vector: Haar-distributed pure state.
pub fn haar_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(d, |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    v.normalize()
}

pub fn haar_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> QuantumState {
    QuantumState::single(projector(&haar_vector(d, rng))).expect("rank-one projector is Hermitian")
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix, with
/// the phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { c(1.0, 0.0) };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

/// Mixed state drawn from the Hilbert–Schmidt measure, `G G† / tr(G G†)`.
pub fn random_mixed_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> QuantumState {
    let g = CMatrix::from_fn(d, d, |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = trace(&m).re;
    let m = crate::numerics::hermitian_part(&m.unscale(tr));
    QuantumState::single(m).expect("G G† is Hermitian")
}

/// `P_sym^{(n)} / binom(n+d-1, n)`: the Haar average of `ψ^{⊗n}`.
pub fn averaged_iid_block(n: usize, d: usize) -> Result<QuantumState> {
    let p = sym_projector(n, d)?;
    let norm = sym_dim(n, d) as f64;
    QuantumState::new(p.unscale(norm), SubsystemShape::uniform(d, n)?)
}

/// Which program block the data copies were drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProgramHypothesis {
    /// Data shares the state of the first block.
    A,
    /// Data shares the state of the last block.
    B,
}

fn check_dense(d: usize, n: usize) -> Result<()> {
    let dim = (d as u128).pow(n as u32);
    if dim > crate::symmetry::DENSE_DIM_LIMIT as u128 {
        return Err(Error::DimensionOverflow { dim, limit: crate::symmetry::DENSE_DIM_LIMIT });
    }
    Ok(())
}

/// Effective state of a programmable discriminator with registers ordered
/// (first program block, data, last program block).
pub fn programmable_effective(
    n1: usize,
    m: usize,
    n3: usize,
    hypothesis: ProgramHypothesis,
    d: usize,
) -> Result<QuantumState> {
    check_dense(d, n1 + m + n3)?;
    let (left, right) = match hypothesis {
        ProgramHypothesis::A => (n1 + m, n3),
        ProgramHypothesis::B => (n1, m + n3),
    };
    Ok(averaged_iid_block(left, d)?.tensor(&averaged_iid_block(right, d)?))
}

/// Prior probabilities over a family of hypothesis states.
#[derive(Debug, Clone)]
pub struct Ensemble {
    priors: Vec<f64>,
    states: Vec<QuantumState>,
}

impl Ensemble {
    pub fn new(priors: Vec<f64>, states: Vec<QuantumState>) -> Result<Self> {
        if priors.len() != states.len() {
            return Err(Error::DimensionMismatch { expected: states.len(), found: priors.len() });
        }
        if states.is_empty() {
            return Err(Error::InvalidInput("ensemble has no hypotheses".into()));
        }
        if priors.iter().any(|&p| p.is_nan() || p < 0.0) {
            return Err(Error::InvalidInput("priors must be non-negative".into()));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("priors sum to {total}, expected 1")));
        }
        let dim = states[0].dim();
        for s in &states {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: s.dim() });
            }
            s.validate_density()?;
        }
        Ok(Self { priors, states })
    }

    pub fn uniform(states: Vec<QuantumState>) -> Result<Self> {
        let k = states.len();
        Self::new(vec![1.0 / k as f64; k], states)
    }

    /// Uniform ensemble of states that are density operators by
    /// construction; skips the spectral check.
    pub(crate) fn uniform_trusted(states: Vec<QuantumState>) -> Self {
        let k = states.len();
        debug_assert!(states.iter().all(|s| (s.trace() - 1.0).abs() < PSD_TOL));
        Self { priors: vec![1.0 / k as f64; k], states }
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn states(&self) -> &[QuantumState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// `p_i ρ_i` for every hypothesis.
    pub fn weighted(&self) -> Vec<CMatrix> {
        self.priors
            .iter()
            .zip(&self.states)
            .map(|(&p, s)| s.matrix().scale(p))
            .collect()
    }

    /// Conjugate every hypothesis by the same unitary.
    pub fn conjugated(&self, w: &CMatrix) -> Ensemble {
        Ensemble {
            priors: self.priors.clone(),
            states: self.states.iter().map(|s| s.conjugated(w)).collect(),
        }
    }

    /// Largest deviation `‖W σ W† - σ‖_max` over the hypotheses.
    pub fn invariance_defect(&self, w: &CMatrix) -> f64 {
        self.states
            .iter()
            .map(|s| max_abs_diff(&s.conjugated(w).matrix, s.matrix()))
            .fold(0.0, f64::max)
    }
}

/// Knowledge of the states before and after the change point.
#[derive(Debug, Clone)]
pub enum ChangePointCase {
    /// Both states known; both must be pure.
    KnownKnown { rho0: QuantumState, rho1: QuantumState },
    /// Initial state known and pure, final state unknown.
    KnownUnknown { rho0: QuantumState },
    UnknownUnknown,
}

fn require_pure(state: &QuantumState, d: usize) -> Result<()> {
    if state.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: state.dim() });
    }
    state.validate_density()?;
    let purity = state.purity();
    if (purity - 1.0).abs() > PSD_TOL {
        return Err(Error::NotPure { purity });
    }
    Ok(())
}

/// Change-point hypotheses `k = 1..=n` with a uniform prior: the first
/// `k - 1` systems come from the initial source, the rest from the final one.
pub fn change_point_ensemble(n: usize, case: &ChangePointCase, d: usize) -> Result<Ensemble> {
    if n == 0 {
        return Err(Error::InvalidInput("change point needs at least one system".into()));
    }
    check_dense(d, n)?;
    let states = match case {
        ChangePointCase::KnownKnown { rho0, rho1 } => {
            require_pure(rho0, d)?;
            require_pure(rho1, d)?;
            (1..=n)
                .map(|k| rho0.tensor_power(k - 1).tensor(&rho1.tensor_power(n - k + 1)))
                .collect::<Vec<_>>()
        }
        ChangePointCase::KnownUnknown { rho0 } => {
            require_pure(rho0, d)?;
            (1..=n)
                .map(|k| Ok(rho0.tensor_power(k - 1).tensor(&averaged_iid_block(n - k + 1, d)?)))
                .collect::<Result<Vec<_>>>()?
        }
        ChangePointCase::UnknownUnknown => (1..=n)
            .map(|k| Ok(averaged_iid_block(k - 1, d)?.tensor(&averaged_iid_block(n - k + 1, d)?)))
            .collect::<Result<Vec<_>>>()?,
    };
    let states = states
        .into_iter()
        .map(|s| QuantumState::new(s.matrix, SubsystemShape::uniform(d, n)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble::uniform_trusted(states))
}

/// Binary labellings `x ∈ {0,1}^n` with `x_1 = 0`, in counting order.
pub fn clustering_labels(n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return Vec::new();
    }
    (0..1usize << (n - 1))
        .map(|bits| {
            (0..n).map(|pos| if pos == 0 { 0 } else { ((bits >> (n - 1 - pos)) & 1) as u8 }).collect()
        })
        .collect()
}

/// Effective state of the labelling `x` when both templates are unknown.
pub fn clustering_state(x: &[u8], d: usize) -> Result<QuantumState> {
    let n = x.len();
    check_dense(d, n)?;
    let zeros: Vec<usize> = (0..n).filter(|&i| x[i] == 0).collect();
    let ones: Vec<usize> = (0..n).filter(|&i| x[i] == 1).collect();
    let sorted = averaged_iid_block(zeros.len(), d)?.tensor(&averaged_iid_block(ones.len(), d)?);
    // Slot s of the sorted arrangement holds the system at position order[s].
    let order: Vec<usize> = zeros.iter().chain(&ones).copied().collect();
    let tau = Permutation::new(order)?;
    let m = conjugate_by_permutation(sorted.matrix(), &tau, d);
    QuantumState::new(m, SubsystemShape::uniform(d, n)?)
}

/// All `2^{n-1}` clustering hypotheses with a uniform prior.
pub fn clustering_ensemble(n: usize, d: usize) -> Result<Ensemble> {
    if n == 0 {
        return Err(Error::InvalidInput("clustering needs at least one system".into()));
    }
    check_dense(d, n)?;
    let states = clustering_labels(n)
        .par_iter()
        .map(|x| clustering_state(x, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble::uniform_trusted(states))
}

/// `W† (V_τ (P_a ⊗ P_b) V_τ†) W` for normalized symmetric blocks of sizes
/// `na` and `nb`, where `order[s]` is the position of the system held in
/// slot `s`. Avoids forming the `d^n`-dimensional state.
fn compress_sorted_pair(na: usize, nb: usize, order: &[usize], d: usize, w: &CMatrix) -> Result<CMatrix> {
    let n = na + nb;
    check_dense(d, n)?;
    let dim = d.pow(n as u32);
    if w.nrows() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: w.nrows() });
    }
    let map = permutation_index_map(&Permutation::new(order.to_vec())?, d);
    let moved = CMatrix::from_fn(dim, w.ncols(), |i, j| w[(map[i], j)]);
    let a = averaged_iid_block(na, d)?;
    let b = averaged_iid_block(nb, d)?;
    Ok(moved.adjoint() * kron_apply(a.matrix(), b.matrix(), &moved))
}

/// [`clustering_state`] compressed by the isometry `w`.
pub fn clustering_compressed(x: &[u8], d: usize, w: &CMatrix) -> Result<CMatrix> {
    let n = x.len();
    let zeros: Vec<usize> = (0..n).filter(|&i| x[i] == 0).collect();
    let ones: Vec<usize> = (0..n).filter(|&i| x[i] == 1).collect();
    let order: Vec<usize> = zeros.iter().chain(&ones).copied().collect();
    compress_sorted_pair(zeros.len(), ones.len(), &order, d, w)
}

/// Unknown-unknown change-point hypothesis `k` (1-based) compressed by `w`.
pub fn change_point_unknown_compressed(n: usize, k: usize, d: usize, w: &CMatrix) -> Result<CMatrix> {
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, count: n });
    }
    let order: Vec<usize> = (0..n).collect();
    compress_sorted_pair(k - 1, n - k + 1, &order, d, w)
}
