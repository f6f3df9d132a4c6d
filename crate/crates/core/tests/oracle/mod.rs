//! Independent reference values for minimum-error discrimination.
//!
//! The optimum is approached from above through the dual problem
//! `min tr Y` subject to `Y ≥ p_i ρ_i`. Writing `Y = t·1 + H` with `H`
//! traceless, the optimal `t` for fixed `H` is `max_i λ_max(A_i − H)`, which
//! leaves an unconstrained convex minimization over `H`, solved here by a
//! coarse grid followed by restarted Nelder–Mead. Ensembles are first split
//! into small real blocks: highest-weight vectors for unitarily invariant
//! ensembles, weight sectors of the diagonal torus otherwise.

#![allow(dead_code)]

pub mod cases;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use uql_core::datasets::Ensemble;

pub type RMatrix = DMatrix<f64>;

/// Real part of every weighted hypothesis, checking the imaginary part is
/// negligible.
pub fn real_weighted(ens: &Ensemble) -> Vec<RMatrix> {
    ens.priors()
        .iter()
        .zip(ens.states())
        .map(|(&p, s)| {
            let m = s.matrix();
            assert!(m.iter().all(|z| z.im.abs() < 1e-13), "oracle expects real states");
            RMatrix::from_fn(m.nrows(), m.ncols(), |i, j| p * m[(i, j)].re)
        })
        .collect()
}

fn lambda_max(m: &RMatrix) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.max()
}

fn trace_norm(m: &RMatrix) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.iter().map(|x| x.abs()).sum()
}

/// `½(1 + ‖A₀ − A₁‖₁)` for weighted operators with `tr(A₀ + A₁) = 1`, or in
/// general `(tr(A₀ + A₁) + ‖A₀ − A₁‖₁)/2`.
pub fn helstrom(a0: &RMatrix, a1: &RMatrix) -> f64 {
    0.5 * ((a0 + a1).trace() + trace_norm(&(a0 - a1)))
}

/// Traceless symmetric matrix from `r(r+1)/2 − 1` parameters.
fn traceless(r: usize, h: &[f64]) -> RMatrix {
    let mut m = RMatrix::zeros(r, r);
    let mut k = 0;
    for i in 0..r - 1 {
        m[(i, i)] = h[k];
        k += 1;
    }
    m[(r - 1, r - 1)] = -h[..r - 1].iter().sum::<f64>();
    for i in 0..r {
        for j in i + 1..r {
            m[(i, j)] = h[k];
            m[(j, i)] = h[k];
            k += 1;
        }
    }
    m
}

fn dual_objective(ops: &[RMatrix], h: &[f64]) -> f64 {
    let r = ops[0].nrows();
    let hm = traceless(r, h);
    r as f64 * ops.iter().map(|a| lambda_max(&(a - &hm))).fold(f64::NEG_INFINITY, f64::max)
}

fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, start: &[f64], scale: f64, iters: usize) -> (Vec<f64>, f64) {
    let p = start.len();
    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..p {
        let mut v = start.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    for _ in 0..iters {
        let mut order: Vec<usize> = (0..=p).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        if (values[p] - values[0]).abs() < 1e-15 {
            break;
        }
        let centroid: Vec<f64> = (0..p).map(|k| simplex[..p].iter().map(|v| v[k]).sum::<f64>() / p as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..p).map(|k| centroid[k] + t * (simplex[p][k] - centroid[k])).collect() };
        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[p] = xe;
                values[p] = fe;
            } else {
                simplex[p] = xr;
                values[p] = fr;
            }
        } else if fr < values[p - 1] {
            simplex[p] = xr;
            values[p] = fr;
        } else {
            let xc = if fr < values[p] { along(-0.5) } else { along(0.5) };
            let fc = f(&xc);
            if fc < values[p].min(fr) {
                simplex[p] = xc;
                values[p] = fc;
            } else {
                for i in 1..=p {
                    simplex[i] = (0..p).map(|k| simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k])).collect();
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = (0..=p).min_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap()).unwrap();
    (simplex[best].clone(), values[best])
}

/// Optimal success for weighted real operators on one block.
pub fn block_optimum(ops: &[RMatrix]) -> f64 {
    let r = ops[0].nrows();
    if r == 1 {
        return ops.iter().map(|a| a[(0, 0)]).fold(f64::NEG_INFINITY, f64::max);
    }
    if ops.len() == 2 {
        return helstrom(&ops[0], &ops[1]);
    }
    let p = r * (r + 1) / 2 - 1;
    let f = |h: &[f64]| dual_objective(ops, h);
    let spread = ops.iter().map(|a| a.amax()).fold(0.0, f64::max).max(1e-12);

    // Coarse grid.
    let levels: usize = if p <= 2 { 21 } else { 7 };
    let mut starts: Vec<(Vec<f64>, f64)> = Vec::new();
    let total = levels.pow(p as u32);
    for idx in 0..total {
        let mut rem = idx;
        let h: Vec<f64> = (0..p)
            .map(|_| {
                let l = rem % levels;
                rem /= levels;
                spread * (2.0 * l as f64 / (levels - 1) as f64 - 1.0)
            })
            .collect();
        let v = f(&h);
        starts.push((h, v));
    }
    starts.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    starts.truncate(4);

    let mut best = f64::INFINITY;
    for (h0, _) in starts {
        let mut h = h0;
        let mut scale = spread * 0.25;
        let mut last = f64::INFINITY;
        for _ in 0..60 {
            let (hn, v) = nelder_mead(&f, &h, scale, 4000);
            h = hn;
            if last - v < 1e-15 && scale < 1e-9 * spread {
                last = last.min(v);
                break;
            }
            last = last.min(v);
            scale = (scale * 0.3).max(1e-12 * spread);
        }
        best = best.min(last);
    }
    best
}

/// Sum of block optima.
pub fn optimum(blocks: &[(f64, Vec<RMatrix>)]) -> f64 {
    blocks.iter().map(|(w, ops)| w * block_optimum(ops)).sum()
}

// --- Reduction of unitarily invariant ensembles -------------------------

fn strings(n: usize, d: usize) -> Vec<Vec<usize>> {
    (0..d.pow(n as u32))
        .map(|mut i| {
            let mut s = vec![0; n];
            for pos in (0..n).rev() {
                s[pos] = i % d;
                i /= d;
            }
            s
        })
        .collect()
}

fn index(s: &[usize], d: usize) -> usize {
    s.iter().fold(0, |acc, &x| acc * d + x)
}

/// Partitions of `n` into at most `d` parts, padded with zeros.
fn partitions(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if n == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for part in (0..=n.min(max)).rev() {
            prefix.push(part);
            rec(n - part, part, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, d, &mut Vec::new(), &mut out);
    out
}

/// Weyl dimension formula for the unitary irrep with highest weight `y`.
fn weyl_dim(y: &[usize]) -> f64 {
    let d = y.len();
    let mut num = 1.0;
    let mut den = 1.0;
    for i in 0..d {
        for j in i + 1..d {
            num *= (y[i] as f64 - y[j] as f64) + (j - i) as f64;
            den *= (j - i) as f64;
        }
    }
    num / den
}

/// Orthonormal basis of highest-weight vectors of weight `y`: the null space
/// of all raising operators on the weight space, from an SVD.
fn highest_weight_basis(n: usize, d: usize, y: &[usize]) -> RMatrix {
    let all = strings(n, d);
    let members: Vec<usize> = (0..all.len())
        .filter(|&i| (0..d).all(|a| all[i].iter().filter(|&&x| x == a).count() == y[a]))
        .collect();
    let w = members.len();
    let dim = all.len();
    // Stack E_{a,a+1} restricted to the weight space.
    let mut rows: Vec<DVector<f64>> = Vec::new();
    for a in 0..d - 1 {
        let mut e = RMatrix::zeros(dim, w);
        for (loc, &i) in members.iter().enumerate() {
            for pos in 0..n {
                if all[i][pos] == a + 1 {
                    let mut t = all[i].clone();
                    t[pos] = a;
                    e[(index(&t, d), loc)] += 1.0;
                }
            }
        }
        for r in 0..dim {
            let row = e.row(r).transpose();
            if row.amax() > 0.0 {
                rows.push(row);
            }
        }
    }
    let stacked = if rows.is_empty() {
        RMatrix::zeros(1, w)
    } else {
        RMatrix::from_fn(rows.len(), w, |i, j| rows[i][j])
    };
    // Null space: eigenvectors of SᵀS with zero eigenvalue.
    let gram = stacked.transpose() * &stacked;
    let eig = SymmetricEigen::new(gram);
    let kernel: Vec<usize> = (0..w).filter(|&k| eig.eigenvalues[k].abs() < 1e-9).collect();
    let mut basis = RMatrix::zeros(dim, kernel.len());
    for (col, &k) in kernel.iter().enumerate() {
        for (loc, &i) in members.iter().enumerate() {
            basis[(i, col)] = eig.eigenvectors[(loc, k)];
        }
    }
    basis
}

/// Blocks `(unitary dimension, compressed weighted operators)` of an
/// ensemble of `U^{⊗n}`-invariant states.
pub fn invariant_reduction(ops: &[RMatrix], n: usize, d: usize) -> Vec<(f64, Vec<RMatrix>)> {
    let mut total_dim = 0.0;
    let mut out = Vec::new();
    for y in partitions(n, d) {
        let basis = highest_weight_basis(n, d, &y);
        if basis.ncols() == 0 {
            continue;
        }
        total_dim += weyl_dim(&y) * basis.ncols() as f64;
        let local = ops.iter().map(|a| basis.transpose() * a * &basis).collect();
        out.push((weyl_dim(&y), local));
    }
    assert!((total_dim - (d as f64).powi(n as i32)).abs() < 1e-9, "reduction is incomplete");
    out
}

/// Blocks of a general real ensemble: the weight sectors of the diagonal
/// torus (the operators must commute with it), each restricted to the
/// support of `Σ A_i`.
pub fn torus_reduction(ops: &[RMatrix], n: usize, d: usize) -> Vec<(f64, Vec<RMatrix>)> {
    let all = strings(n, d);
    let weight = |s: &[usize]| -> Vec<usize> { (0..d).map(|a| s.iter().filter(|&&x| x == a).count()).collect() };
    let mut sectors: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
    for (i, s) in all.iter().enumerate() {
        sectors.entry(weight(s)).or_default().push(i);
    }
    let sum = ops.iter().fold(RMatrix::zeros(all.len(), all.len()), |acc, a| acc + a);
    let mut out = Vec::new();
    for members in sectors.values() {
        let w = members.len();
        let pick = RMatrix::from_fn(all.len(), w, |i, j| if members[j] == i { 1.0 } else { 0.0 });
        let local_sum = pick.transpose() * &sum * &pick;
        let eig = SymmetricEigen::new(local_sum);
        let scale = eig.eigenvalues.amax();
        let keep: Vec<usize> = (0..w).filter(|&k| eig.eigenvalues[k] > 1e-10 * scale.max(1e-300)).collect();
        if keep.is_empty() {
            continue;
        }
        let v = RMatrix::from_fn(w, keep.len(), |i, j| eig.eigenvectors[(i, keep[j])]);
        let basis = &pick * v;
        // Operators must not couple different sectors.
        for a in ops {
            let leak = a * &pick - &pick * (pick.transpose() * a * &pick);
            assert!(leak.amax() < 1e-12, "operator couples weight sectors");
        }
        out.push((1.0, ops.iter().map(|a| basis.transpose() * a * &basis).collect()));
    }
    out
}

/// Block of pure states with Gram matrix `g`: `A_i = p_i v_i v_iᵀ` with
/// `v_i` the columns of `g^{1/2}`.
pub fn gram_reduction(g: &RMatrix, priors: &[f64]) -> Vec<(f64, Vec<RMatrix>)> {
    let eig = SymmetricEigen::new(g.clone());
    let sqrt = &eig.eigenvectors
        * RMatrix::from_diagonal(&eig.eigenvalues.map(|x| x.max(0.0).sqrt()))
        * eig.eigenvectors.transpose();
    let ops = priors
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let v = sqrt.column(i);
            v * v.transpose() * p
        })
        .collect();
    vec![(1.0, ops)]
}
