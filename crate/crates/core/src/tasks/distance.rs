//! Hilbert–Schmidt distance and its two-copy swap estimator.

use crate::datasets::QuantumState;
use crate::error::{Error, Result};
use crate::numerics::{kron, trace, trace_product_re};
use crate::symmetry::{permutation_op, sym_projector, Permutation};

fn check_pair(a: &QuantumState, b: &QuantumState) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

/// `tr[(ρ₁ − ρ₂)²]` by direct matrix algebra.
pub fn hs_distance_sq(rho1: &QuantumState, rho2: &QuantumState) -> Result<f64> {
    check_pair(rho1, rho2)?;
    let diff = rho1.matrix() - rho2.matrix();
    Ok(trace_product_re(&diff, &diff))
}

/// `tr[V_swap (ρ ⊗ σ)]`, with `V_swap = P_sym − P_anti = 2 P_sym − 1`.
pub fn swap_expectation(rho: &QuantumState, sigma: &QuantumState) -> Result<f64> {
    check_pair(rho, sigma)?;
    let d = rho.dim();
    let v = sym_projector(2, d)?.scale(2.0) - crate::numerics::identity(d * d);
    Ok(trace(&(v * kron(rho.matrix(), sigma.matrix()))).re)
}

/// Expectation of the swap-based estimator
/// `V(ρ₁,ρ₁) + V(ρ₂,ρ₂) − 2 V(ρ₁,ρ₂)`; equals `tr[(ρ₁ − ρ₂)²]`.
pub fn hs_swap_estimate(rho1: &QuantumState, rho2: &QuantumState) -> Result<f64> {
    Ok(swap_expectation(rho1, rho1)? + swap_expectation(rho2, rho2)? - 2.0 * swap_expectation(rho1, rho2)?)
}

/// The swap operator itself, for direct comparison with the projector form.
pub fn swap_operator(d: usize) -> Result<crate::numerics::CMatrix> {
    permutation_op(&Permutation::transposition(2, 0, 1)?, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::random_mixed_state;
    use crate::numerics::{c, max_abs_diff, CVector};
    use rand::SeedableRng;

    fn ket(i: usize) -> QuantumState {
        let mut v = CVector::zeros(2);
        v[i] = c(1.0, 0.0);
        QuantumState::pure(&v).unwrap()
    }

    #[test]
    fn examples() {
        assert!((hs_distance_sq(&ket(0), &ket(1)).unwrap() - 2.0).abs() < 1e-15);
        assert!(hs_distance_sq(&ket(0), &ket(0)).unwrap().abs() < 1e-15);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let a = random_mixed_state(2, &mut rng);
            let b = random_mixed_state(2, &mut rng);
            let direct = trace_product_re(a.matrix(), b.matrix());
            assert!((swap_expectation(&a, &b).unwrap() - direct).abs() < 1e-12);
            assert!((hs_swap_estimate(&a, &b).unwrap() - hs_distance_sq(&a, &b).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn swap_is_difference_of_projectors() {
        for d in 2..=3 {
            let v = sym_projector(2, d).unwrap().scale(2.0) - crate::numerics::identity(d * d);
            assert!(max_abs_diff(&v, &swap_operator(d).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let a = random_mixed_state(2, &mut rng);
        let b = random_mixed_state(3, &mut rng);
        assert!(hs_distance_sq(&a, &b).is_err());
    }
}
