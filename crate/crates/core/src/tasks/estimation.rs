//! Pure-state estimation from `n` copies with the covariant measurement.

use rand::Rng;

use crate::datasets::haar_vector;
use crate::error::{Error, Result};
use crate::mc::{self, McEstimate};
use crate::numerics::CVector;
use crate::symmetry::{sym_dim, sym_projector};

/// Optimal average fidelity `(n+1)/(n+d)`.
pub fn estimation_fidelity_closed(n: usize, d: usize) -> f64 {
    (n + 1) as f64 / (n + d) as f64
}

/// Rank of the dense symmetric projector, read off its trace after checking
/// idempotence on a fixed probe vector.
fn sym_rank(n: usize, d: usize) -> Result<f64> {
    let p = sym_projector(n, d)?;
    let dim = p.nrows();
    let probe = CVector::from_fn(dim, |i, _| {
        let t = i as f64 + 1.0;
        num_complex::Complex64::new(t.sin(), (0.5 * t).cos())
    });
    let once = &p * &probe;
    let twice = &p * &once;
    let defect = (&twice - &once).camax();
    if defect > 1e-10 {
        return Err(Error::InvalidInput(format!("symmetric projector not idempotent ({defect:e})")));
    }
    Ok(crate::numerics::trace(&p).re)
}

/// `d_n / d_{n+1}` from explicitly constructed projectors.
pub fn estimation_fidelity_exact(n: usize, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("local dimension must be at least 2, got {d}")));
    }
    Ok(sym_rank(n, d)? / sym_rank(n + 1, d)?)
}

/// One importance-weighted draw: `ψ, φ` Haar, value `d_n u^{n+1}` with
/// `u = |<φ|ψ>|²`.
pub fn estimation_trial<R: Rng + ?Sized>(n: usize, d: usize, weight: f64, rng: &mut R) -> f64 {
    let psi = haar_vector(d, rng);
    let phi = haar_vector(d, rng);
    let u = phi.dotc(&psi).norm_sqr();
    weight * u.powi(n as i32 + 1)
}

/// Monte Carlo estimate of the average fidelity of the covariant POVM
/// `E_φ = d_n φ^{⊗n}` with guess `φ`.
pub fn estimation_fidelity_mc(n: usize, d: usize, samples: usize, seed: u64) -> Result<McEstimate> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("local dimension must be at least 2, got {d}")));
    }
    if samples < 1000 {
        return Err(Error::InvalidInput(format!("need at least 1000 samples, got {samples}")));
    }
    let weight = sym_dim(n, d) as f64;
    Ok(mc::estimate(samples, seed, |rng| estimation_trial(n, d, weight, rng)))
}
