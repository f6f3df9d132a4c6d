//! Compression of `U^{⊗n}`-invariant operators onto their multiplicity
//! spaces.
//!
//! An operator commuting with every `U^{⊗n}` has the form
//! `⊕_y 1_{U(y)} ⊗ X_y`. Restricting it to an orthonormal basis of
//! highest-weight vectors of weight `y` yields `X_y`, a `dim_sn(y)`-sized
//! matrix, without building the full Schur transform.

use std::collections::HashMap;

use num_complex::Complex64;

use super::partition::{dim_sn, dim_sud, partitions, Partition};
use super::permutation::DENSE_DIM_LIMIT;
use super::schur::qubit_schur_blocks;
use crate::error::{Error, Result};
use crate::numerics::{herm_eig, CMatrix};

/// Multiplicity space of one irrep label.
#[derive(Debug, Clone)]
pub struct InvariantBlock {
    pub label: Partition,
    /// Dimension of the unitary irrep, i.e. how many times the block repeats.
    pub unitary_dim: u128,
    /// `d^n x dim_sn(label)` isometry onto highest-weight vectors.
    pub basis: CMatrix,
}

impl InvariantBlock {
    /// `basis† op basis`.
    pub fn compress(&self, op: &CMatrix) -> CMatrix {
        self.basis.adjoint() * op * &self.basis
    }
}

/// Multiplicity blocks for qubits, read off the `M = J` columns of the
/// sequentially coupled Schur blocks.
pub fn qubit_invariant_blocks(n: usize) -> Result<Vec<InvariantBlock>> {
    let blocks = qubit_schur_blocks(n)?;
    let mut out: Vec<InvariantBlock> = Vec::new();
    for b in blocks {
        let col = b.isometry.column(0).into_owned();
        match out.last_mut() {
            Some(last) if last.label == b.label => {
                let mut cols: Vec<_> = last.basis.column_iter().map(|c| c.into_owned()).collect();
                cols.push(col);
                last.basis = CMatrix::from_columns(&cols);
            }
            _ => out.push(InvariantBlock {
                unitary_dim: (b.twice_spin + 1) as u128,
                label: b.label,
                basis: CMatrix::from_columns(&[col]),
            }),
        }
    }
    Ok(out)
}

/// Multiplicity blocks for general `d`, from the common kernel of the raising
/// operators `E_{a,a+1}` on each weight space.
pub fn highest_weight_blocks(n: usize, d: usize) -> Result<Vec<InvariantBlock>> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("local dimension must be at least 2, got {d}")));
    }
    let dim_u = (d as u128).pow(n as u32);
    if dim_u > DENSE_DIM_LIMIT as u128 {
        return Err(Error::DimensionOverflow { dim: dim_u, limit: DENSE_DIM_LIMIT });
    }
    let dim = dim_u as usize;
    let strings: Vec<Vec<usize>> = (0..dim)
        .map(|mut i| {
            let mut s = vec![0; n];
            for pos in (0..n).rev() {
                s[pos] = i % d;
                i /= d;
            }
            s
        })
        .collect();
    let index_of = |s: &[usize]| s.iter().fold(0usize, |acc, &x| acc * d + x);

    let mut out = Vec::new();
    for y in partitions(n, d) {
        let weight: Vec<usize> = y.parts().to_vec();
        let members: Vec<usize> = (0..dim)
            .filter(|&i| {
                let mut counts = vec![0usize; d];
                for &x in &strings[i] {
                    counts[x] += 1;
                }
                counts == weight
            })
            .collect();
        let w = members.len();

        // K = Σ_a E_a† E_a restricted to the weight space.
        let mut k = CMatrix::zeros(w, w);
        for a in 0..d - 1 {
            let mut preimages: HashMap<usize, Vec<usize>> = HashMap::new();
            for (loc, &i) in members.iter().enumerate() {
                for pos in 0..n {
                    if strings[i][pos] == a + 1 {
                        let mut t = strings[i].clone();
                        t[pos] = a;
                        preimages.entry(index_of(&t)).or_default().push(loc);
                    }
                }
            }
            for sources in preimages.values() {
                for &s in sources {
                    for &t in sources {
                        k[(s, t)] += Complex64::new(1.0, 0.0);
                    }
                }
            }
        }
        let eig = herm_eig(&k)?;
        let kernel: Vec<usize> = (0..w).filter(|&j| eig.values[j] < 0.5).collect();
        let expected = dim_sn(&y) as usize;
        if kernel.len() != expected {
            return Err(Error::InvalidInput(format!(
                "highest-weight space of {y} has dimension {}, expected {expected}",
                kernel.len()
            )));
        }
        let mut basis = CMatrix::zeros(dim, expected);
        for (col, &j) in kernel.iter().enumerate() {
            for (loc, &i) in members.iter().enumerate() {
                basis[(i, col)] = eig.vectors[(loc, j)];
            }
        }
        out.push(InvariantBlock {
            unitary_dim: dim_sud(&y, d),
            label: y,
            basis,
        });
    }
    Ok(out)
}

/// Multiplicity blocks of `(C^d)^{⊗n}`: coupled Schur blocks for qubits,
/// highest-weight vectors otherwise.
pub fn invariant_blocks(n: usize, d: usize) -> Result<Vec<InvariantBlock>> {
    if d == 2 {
        qubit_invariant_blocks(n)
    } else {
        highest_weight_blocks(n, d)
    }
}
