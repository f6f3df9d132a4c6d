//! Dense complex linear algebra kernel.
//!
//! Every operator in the crate is a [`CMatrix`] (a dense `nalgebra` matrix of
//! `Complex64`). Tensor-product bookkeeping goes through [`SubsystemShape`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Absolute max-norm tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerance on the smallest eigenvalue when testing positivity.
pub const PSD_TOL: f64 = 1e-9;
/// Relative eigenvalue cutoff used by every pseudo-inverse.
pub const PINV_REL_CUTOFF: f64 = 1e-10;

/// Local dimensions of an ordered list of subsystems.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SubsystemShape {
    dims: Vec<usize>,
}

impl SubsystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidInput(format!(
                "local dimension must be at least 2, got {bad}"
            )));
        }
        Ok(Self { dims })
    }

    /// `n` copies of a `d`-dimensional system.
    pub fn uniform(d: usize, n: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Product of the local dimensions (1 for the empty shape).
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn concat(&self, other: &SubsystemShape) -> SubsystemShape {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        SubsystemShape { dims }
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Rank-one operator `|v><v|`.
pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `(a ⊗ b) x` without forming the Kronecker product.
pub fn kron_apply(a: &CMatrix, b: &CMatrix, x: &CMatrix) -> CMatrix {
    let (da, db) = (a.nrows(), b.nrows());
    assert_eq!(x.nrows(), da * db, "kron_apply: dimension mismatch");
    let bt = b.transpose();
    let mut out = CMatrix::zeros(da * db, x.ncols());
    for col in 0..x.ncols() {
        let xm = CMatrix::from_fn(da, db, |i, j| x[(i * db + j, col)]);
        let y = a * xm * &bt;
        for i in 0..da {
            for j in 0..db {
                out[(i * db + j, col)] = y[(i, j)];
            }
        }
    }
    out
}

/// Kronecker product of a sequence of matrices, left to right. The empty
/// product is the 1x1 identity.
pub fn kron_all<'a, I>(factors: I) -> CMatrix
where
    I: IntoIterator<Item = &'a CMatrix>,
{
    factors
        .into_iter()
        .fold(identity(1), |acc, f| kron(&acc, f))
}

/// `n`-fold tensor power.
pub fn kron_power(a: &CMatrix, n: usize) -> CMatrix {
    (0..n).fold(identity(1), |acc, _| kron(&acc, a))
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Real part of `tr(a b)` without forming the product.
pub fn trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..a.ncols() {
            let x = a[(i, k)];
            let y = b[(k, i)];
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// `max |m - m†|` entrywise.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

fn ensure_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

fn ensure_hermitian(m: &CMatrix) -> Result<()> {
    ensure_square(m)?;
    let deviation = hermiticity_deviation(m);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Trace out every subsystem whose index is not listed in `keep`.
///
/// The kept subsystems retain their original relative order.
pub fn partial_trace(m: &CMatrix, shape: &SubsystemShape, keep: &[usize]) -> Result<CMatrix> {
    ensure_square(m)?;
    let dims = shape.dims();
    let total = shape.total_dim();
    if m.nrows() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: m.nrows(),
        });
    }
    for &k in keep {
        if k >= dims.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                count: dims.len(),
            });
        }
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();

    // Row-major strides of the full index.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let kept_dims: Vec<usize> = kept.iter().map(|&i| dims[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let env_dim: usize = traced_dims.iter().product();

    // Offset into the full index contributed by a multi-index over a subset.
    let offsets = |subset: &[usize], sub_dims: &[usize]| -> Vec<usize> {
        let count: usize = sub_dims.iter().product();
        (0..count)
            .map(|mut flat| {
                let mut off = 0;
                for pos in (0..subset.len()).rev() {
                    let digit = flat % sub_dims[pos];
                    flat /= sub_dims[pos];
                    off += digit * strides[subset[pos]];
                }
                off
            })
            .collect()
    };
    let kept_off = offsets(&kept, &kept_dims);
    let env_off = offsets(&traced, &traced_dims);

    let mut out = CMatrix::zeros(out_dim, out_dim);
    for (a, &ra) in kept_off.iter().enumerate() {
        for (b, &rb) in kept_off.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &e in &env_off {
                acc += m[(ra + e, rb + e)];
            }
            out[(a, b)] = acc;
        }
    }
    debug_assert_eq!(env_dim, env_off.len());
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order; each eigenvector has its first
/// non-negligible component made real and positive.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermEig {
    pub fn reconstruct(&self) -> CMatrix {
        self.map(|x| x)
    }

    /// `V f(Λ) V†`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let fx = f(lam);
            scaled.column_mut(j).scale_mut(fx);
        }
        scaled * self.vectors.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

pub fn herm_eig(h: &CMatrix) -> Result<HermEig> {
    ensure_hermitian(h)?;
    let n = h.nrows();
    if n == 0 {
        return Ok(HermEig {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let sym = hermitian_part(h);
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, 1000 * n.max(10))
        .ok_or(Error::EigenFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let lead = col.iter().find(|z| z.norm() > 1e-10).copied();
        let phase = match lead {
            Some(z) => z.conj() / z.norm(),
            None => Complex64::new(1.0, 0.0),
        };
        vectors.set_column(dst, &(col * phase));
    }
    Ok(HermEig { values, vectors })
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(a: &CMatrix) -> Result<f64> {
    Ok(herm_eig(a)?.values.iter().map(|x| x.abs()).sum())
}

/// True iff the smallest eigenvalue of `a` is at least `-tol`.
pub fn psd_check(a: &CMatrix, tol: f64) -> bool {
    match herm_eig(a) {
        Ok(e) => e.min() >= -tol,
        Err(_) => false,
    }
}

/// Apply `f` to the eigenvalues above `PINV_REL_CUTOFF * max|λ|`, sending
/// the rest to zero.
pub fn support_function<F: Fn(f64) -> f64>(eig: &HermEig, f: F) -> CMatrix {
    let scale = eig.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cutoff = PINV_REL_CUTOFF * scale;
    eig.map(|x| if x > cutoff { f(x) } else { 0.0 })
}

/// Pseudo-inverse square root of a positive semi-definite matrix.
pub fn pinv_sqrt(a: &CMatrix) -> Result<CMatrix> {
    let eig = herm_eig(a)?;
    Ok(support_function(&eig, |x| 1.0 / x.sqrt()))
}

/// Projector onto the span of eigenvectors with eigenvalue above the relative
/// cutoff.
pub fn support_projector(a: &CMatrix) -> Result<CMatrix> {
    let eig = herm_eig(a)?;
    Ok(support_function(&eig, |_| 1.0))
}

/// Orthonormal basis (as columns) of the support of a PSD matrix.
pub fn support_basis(a: &CMatrix) -> Result<CMatrix> {
    let eig = herm_eig(a)?;
    let scale = eig.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cutoff = PINV_REL_CUTOFF * scale;
    let rank = eig.values.iter().filter(|&&x| x > cutoff).count();
    Ok(eig.vectors.columns(0, rank).into_owned())
}
