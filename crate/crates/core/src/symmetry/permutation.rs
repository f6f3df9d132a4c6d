use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::CMatrix;

/// Largest `d^n` for which dense permutation-invariant operators are built.
pub const DENSE_DIM_LIMIT: usize = 1024;

/// Largest `n` for which the explicit `n!`-term average is evaluated.
pub const EXPLICIT_AVERAGE_MAX_N: usize = 8;

/// A permutation of `0..n`, stored as its images: `self.apply(j) = images[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidInput(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::IndexOutOfRange { index: a.max(b), count: n });
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Ok(Self { images })
    }

    /// Every permutation of `0..n` in lexicographic order of image lists.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(|images| Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, j: usize) -> usize {
        self.images[j]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different size");
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (j, &t) in self.images.iter().enumerate() {
            images[t] = j;
        }
        Permutation { images }
    }
}

fn checked_power(d: usize, n: usize) -> Result<usize> {
    let dim = (d as u128).pow(n as u32);
    if dim > DENSE_DIM_LIMIT as u128 {
        return Err(Error::DimensionOverflow { dim, limit: DENSE_DIM_LIMIT });
    }
    Ok(dim as usize)
}

fn digits(mut index: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for pos in (0..n).rev() {
        out[pos] = index % d;
        index /= d;
    }
    out
}

fn from_digits(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

/// Basis-index map of `V_tau`: `V_tau |i> = |map[i]>`, where the symbol at
/// position `j` moves to position `tau(j)`.
pub fn permutation_index_map(tau: &Permutation, d: usize) -> Vec<usize> {
    let n = tau.len();
    let dim = d.pow(n as u32);
    let mut out_digits = vec![0; n];
    (0..dim)
        .map(|i| {
            let ds = digits(i, d, n);
            for (j, &x) in ds.iter().enumerate() {
                out_digits[tau.apply(j)] = x;
            }
            from_digits(&out_digits, d)
        })
        .collect()
}

/// The unitary `V_tau` on `(C^d)^{⊗n}`, mapping `|i_1…i_n>` to
/// `|i_{τ⁻¹(1)}…i_{τ⁻¹(n)}>`.
pub fn permutation_op(tau: &Permutation, d: usize) -> Result<CMatrix> {
    let dim = checked_power(d, tau.len())?;
    let map = permutation_index_map(tau, d);
    let mut m = CMatrix::zeros(dim, dim);
    for (i, &j) in map.iter().enumerate() {
        m[(j, i)] = Complex64::new(1.0, 0.0);
    }
    Ok(m)
}

/// `V_tau m V_tau†`, computed by relabelling indices.
pub fn conjugate_by_permutation(m: &CMatrix, tau: &Permutation, d: usize) -> CMatrix {
    let map = permutation_index_map(tau, d);
    let dim = map.len();
    assert_eq!(m.nrows(), dim, "operator dimension does not match permutation");
    let mut out = CMatrix::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            out[(map[a], map[b])] = m[(a, b)];
        }
    }
    out
}

/// Projector onto the symmetric subspace of `n` qudits, `(1/n!) Σ_τ V_τ`.
///
/// Evaluated through orbits: `(1/n!) Σ_τ <j|V_τ|i>` equals `1/|orbit(i)|`
/// when `j` is a rearrangement of `i` and zero otherwise.
pub fn sym_projector(n: usize, d: usize) -> Result<CMatrix> {
    let dim = checked_power(d, n)?;
    let mut groups: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
    for i in 0..dim {
        let mut counts = vec![0usize; d];
        for x in digits(i, d, n) {
            counts[x] += 1;
        }
        groups.entry(counts).or_default().push(i);
    }
    let mut p = CMatrix::zeros(dim, dim);
    for members in groups.values() {
        let w = Complex64::new(1.0 / members.len() as f64, 0.0);
        for &a in members {
            for &b in members {
                p[(a, b)] = w;
            }
        }
    }
    Ok(p)
}

/// Explicit `(1/n!) Σ_τ V_τ` over all `n!` permutations. Limited to
/// `n <= 8`; kept as an independent construction of [`sym_projector`].
pub fn permutation_average(n: usize, d: usize) -> Result<CMatrix> {
    if n > EXPLICIT_AVERAGE_MAX_N {
        return Err(Error::InvalidInput(format!(
            "explicit permutation average limited to n <= {EXPLICIT_AVERAGE_MAX_N}, got {n}"
        )));
    }
    let dim = checked_power(d, n)?;
    let mut acc = CMatrix::zeros(dim, dim);
    let mut count = 0usize;
    for tau in Permutation::all(n) {
        for (i, j) in permutation_index_map(&tau, d).into_iter().enumerate() {
            acc[(j, i)] += Complex64::new(1.0, 0.0);
        }
        count += 1;
    }
    Ok(acc.unscale(count as f64))
}
