//! Overlap estimation from `n1` copies of `ψ` and `n2` copies of `φ` by
//! measuring the total spin of the joint state.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use crate::error::{Error, Result};
use crate::mc::chunk_rng;
use crate::numerics::{c, CVector};
use crate::symmetry::{clebsch_gordan, qubit_schur_blocks, MAX_SCHUR_QUBITS};

/// Outcome counts keyed by `2J`.
pub type Histogram = BTreeMap<usize, u64>;

/// Probabilities keyed by `2J`.
pub type BlockDistribution = BTreeMap<usize, f64>;

fn check_sizes(n1: usize, n2: usize) -> Result<()> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidInput("both states need at least one copy".into()));
    }
    if n1 + n2 > MAX_SCHUR_QUBITS {
        return Err(Error::DimensionOverflow { dim: 1u128 << (n1 + n2), limit: 1 << MAX_SCHUR_QUBITS });
    }
    Ok(())
}

fn tensor_power(v: &CVector, n: usize) -> CVector {
    (0..n).fold(CVector::from_element(1, c(1.0, 0.0)), |acc, _| acc.kronecker(v))
}

/// Distribution of the total spin for `|0>^{⊗n1} ⊗ φ^{⊗n2}` with
/// `|<0|φ>|² = overlap`.
///
/// Both factors live in their symmetric subspaces (spins `n1/2`, `n2/2`);
/// `φ^{⊗n2}` is expanded in the Dicke basis given by the top coupled block
/// and recoupled with Clebsch–Gordan coefficients.
pub fn overlap_block_distribution(n1: usize, n2: usize, overlap: f64) -> Result<BlockDistribution> {
    check_sizes(n1, n2)?;
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::InvalidInput(format!("overlap must lie in [0, 1], got {overlap}")));
    }
    let phi = CVector::from_vec(vec![c(overlap.sqrt(), 0.0), c((1.0 - overlap).sqrt(), 0.0)]);
    let top = qubit_schur_blocks(n2)?.swap_remove(0);
    let amplitudes = top.isometry.adjoint() * tensor_power(&phi, n2);

    let (tj1, tj2) = (n1 as i64, n2 as i64);
    let mut out = BlockDistribution::new();
    let mut tj = (tj1 - tj2).abs();
    while tj <= tj1 + tj2 {
        let mut p = 0.0;
        for (col, b) in amplitudes.iter().enumerate() {
            let tm2 = tj2 - 2 * col as i64;
            let tm = tj1 + tm2;
            if tm.abs() > tj {
                continue;
            }
            p += (clebsch_gordan(tj1, tj1, tj2, tm2, tj, tm) * b).norm_sqr();
        }
        out.insert(tj as usize, p);
        tj += 2;
    }
    Ok(out)
}

/// Total-spin distribution of `ψ^{⊗n1} ⊗ φ^{⊗n2}` for arbitrary qubit
/// vectors, from the projectors of the full coupled basis.
pub fn overlap_block_distribution_dense(psi: &CVector, phi: &CVector, n1: usize, n2: usize) -> Result<BlockDistribution> {
    check_sizes(n1, n2)?;
    if psi.len() != 2 || phi.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: psi.len().max(phi.len()) });
    }
    let state = tensor_power(&psi.normalize(), n1).kronecker(&tensor_power(&phi.normalize(), n2));
    let mut out = BlockDistribution::new();
    for block in qubit_schur_blocks(n1 + n2)? {
        *out.entry(block.twice_spin).or_insert(0.0) += (block.isometry.adjoint() * &state).norm_squared();
    }
    Ok(out)
}

fn log_likelihood(hist: &Histogram, n1: usize, n2: usize, overlap: f64) -> Result<f64> {
    let dist = overlap_block_distribution(n1, n2, overlap)?;
    let mut l = 0.0;
    for (&tj, &count) in hist {
        if count == 0 {
            continue;
        }
        let p = dist.get(&tj).copied().unwrap_or(0.0);
        if p <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        l += count as f64 * p.ln();
    }
    Ok(l)
}

const GRID: usize = 1000;

/// Maximum-likelihood overlap from a histogram of total-spin outcomes.
///
/// A grid search over `[0, 1]` is refined by golden-section search around the
/// best grid point; among equal likelihoods the smaller overlap wins.
pub fn overlap_mle(hist: &Histogram, n1: usize, n2: usize) -> Result<f64> {
    check_sizes(n1, n2)?;
    if hist.values().all(|&c| c == 0) {
        return Err(Error::EmptyHistogram);
    }
    let valid = ((n1 as i64 - n2 as i64).unsigned_abs() as usize..=n1 + n2).step_by(2).collect::<Vec<_>>();
    if let Some((&tj, _)) = hist.iter().find(|(tj, &c)| c > 0 && !valid.contains(tj)) {
        return Err(Error::InvalidInput(format!("outcome 2J = {tj} impossible for ({n1}, {n2}) copies")));
    }
    let mut best = (0.0, log_likelihood(hist, n1, n2, 0.0)?);
    for i in 1..=GRID {
        let s = i as f64 / GRID as f64;
        let l = log_likelihood(hist, n1, n2, s)?;
        if l > best.1 {
            best = (s, l);
        }
    }
    let step = 1.0 / GRID as f64;
    let (mut a, mut b) = ((best.0 - step).max(0.0), (best.0 + step).min(1.0));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let x1 = b - ratio * (b - a);
        let x2 = a + ratio * (b - a);
        if log_likelihood(hist, n1, n2, x1)? >= log_likelihood(hist, n1, n2, x2)? {
            b = x2;
        } else {
            a = x1;
        }
    }
    let refined = 0.5 * (a + b);
    let l = log_likelihood(hist, n1, n2, refined)?;
    Ok(if l > best.1 { refined } else { best.0 })
}

/// Simulated outcome counts of `shots` independent total-spin measurements.
pub fn simulate_overlap_histogram(n1: usize, n2: usize, overlap: f64, shots: u64, seed: u64) -> Result<Histogram> {
    let dist = overlap_block_distribution(n1, n2, overlap)?;
    let keys: Vec<usize> = dist.keys().copied().collect();
    let weights: Vec<f64> = dist.values().map(|p| p.max(0.0)).collect();
    let sampler = WeightedIndex::new(&weights).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let mut rng = chunk_rng(seed, 0);
    let mut hist: Histogram = keys.iter().map(|&k| (k, 0)).collect();
    for _ in 0..shots {
        *hist.get_mut(&keys[sampler.sample(&mut rng)]).expect("key from distribution") += 1;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_copies() {
        let d = overlap_block_distribution(1, 1, 1.0).unwrap();
        assert!((d[&2] - 1.0).abs() < 1e-12 && d[&0].abs() < 1e-12);
        let d = overlap_block_distribution(1, 1, 0.0).unwrap();
        assert!((d[&2] - 0.5).abs() < 1e-12 && (d[&0] - 0.5).abs() < 1e-12);
        for s in [0.1, 0.3, 0.77] {
            let d = overlap_block_distribution(1, 1, s).unwrap();
            assert!((d[&0] - (1.0 - s) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_dense_projectors() {
        for (n1, n2) in [(1, 1), (2, 3), (4, 2), (5, 5)] {
            for s in [0.0, 0.25, 0.9] {
                let fast = overlap_block_distribution(n1, n2, s).unwrap();
                let psi = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
                let phi = CVector::from_vec(vec![c(s.sqrt(), 0.0), c((1.0 - s).sqrt(), 0.0)]);
                let dense = overlap_block_distribution_dense(&psi, &phi, n1, n2).unwrap();
                assert!((fast.values().sum::<f64>() - 1.0).abs() < 1e-10);
                for (tj, p) in &dense {
                    let q = fast.get(tj).copied().unwrap_or(0.0);
                    assert!((p - q).abs() < 1e-10, "({n1},{n2}) s={s} 2J={tj}: {p} vs {q}");
                }
            }
        }
    }

    #[test]
    fn mle_examples() {
        let hist: Histogram = [(2, 10), (0, 0)].into_iter().collect();
        assert!((overlap_mle(&hist, 1, 1).unwrap() - 1.0).abs() < 1e-9);
        let hist: Histogram = [(2, 10), (0, 10)].into_iter().collect();
        assert!(overlap_mle(&hist, 1, 1).unwrap().abs() < 1e-9);
        let empty: Histogram = [(2, 0)].into_iter().collect();
        assert!(matches!(overlap_mle(&empty, 1, 1), Err(Error::EmptyHistogram)));
        let bad: Histogram = [(4, 1)].into_iter().collect();
        assert!(overlap_mle(&bad, 1, 1).is_err());
    }

    #[test]
    fn mle_is_consistent() {
        let hist = simulate_overlap_histogram(2, 2, 0.5, 10_000, 1).unwrap();
        assert!((overlap_mle(&hist, 2, 2).unwrap() - 0.5).abs() < 0.05);
    }
}
