//! Qubit Schur blocks built by sequential angular-momentum coupling.
//!
//! Spins are handled through twice their value so that every label is an
//! integer. The single-qubit basis is `|0> = |1/2, +1/2>`, `|1> = |1/2, -1/2>`,
//! and block columns are ordered by `M` descending.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::partition::Partition;
use crate::error::{Error, Result};
use crate::numerics::{identity, CMatrix};

/// Largest number of qubits for which Schur blocks are built.
pub const MAX_SCHUR_QUBITS: usize = 10;

fn fact(n: i64) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Clebsch–Gordan coefficient `<j1 m1; j2 m2 | J M>` with every argument
/// given as twice its value. Condon–Shortley phase convention.
pub fn clebsch_gordan(tj1: i64, tm1: i64, tj2: i64, tm2: i64, tj: i64, tm: i64) -> f64 {
    if tm1 + tm2 != tm {
        return 0.0;
    }
    let parity_ok = |j: i64, m: i64| m.abs() <= j && (j + m) % 2 == 0;
    if !(parity_ok(tj1, tm1) && parity_ok(tj2, tm2) && parity_ok(tj, tm)) {
        return 0.0;
    }
    if tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return 0.0;
    }
    // Integer quantities j1 + j2 - J etc.
    let a = (tj1 + tj2 - tj) / 2;
    let b = (tj1 - tm1) / 2;
    let cc = (tj2 + tm2) / 2;
    let dd = (tj - tj2 + tm1) / 2;
    let e = (tj - tj1 - tm2) / 2;

    let pref = ((tj + 1) as f64 * fact((tj + tj1 - tj2) / 2) * fact((tj - tj1 + tj2) / 2) * fact(a)
        / fact((tj1 + tj2 + tj) / 2 + 1))
        .sqrt();
    let norm = (fact((tj + tm) / 2)
        * fact((tj - tm) / 2)
        * fact((tj1 - tm1) / 2)
        * fact((tj1 + tm1) / 2)
        * fact((tj2 - tm2) / 2)
        * fact((tj2 + tm2) / 2))
        .sqrt();

    let k_min = 0.max(-dd).max(-e);
    let k_max = a.min(b).min(cc);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let denom = fact(k) * fact(a - k) * fact(b - k) * fact(cc - k) * fact(dd + k) * fact(e + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / denom;
    }
    pref * norm * sum
}

/// Couple a spin-`ja` multiplet (columns of `a`, `M` descending) with a
/// spin-`jb` multiplet into total spin `J`, returning the `2J+1` coupled
/// vectors on the tensor-product space (`a` factor first).
pub fn couple_multiplets(a: &CMatrix, tja: usize, b: &CMatrix, tjb: usize, tj: usize) -> CMatrix {
    assert_eq!(a.ncols(), tja + 1);
    assert_eq!(b.ncols(), tjb + 1);
    let (da, db) = (a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(da * db, tj + 1);
    for col in 0..=tj {
        let tm = tj as i64 - 2 * col as i64;
        for ia in 0..=tja {
            let tma = tja as i64 - 2 * ia as i64;
            let tmb = tm - tma;
            if tmb.abs() > tjb as i64 {
                continue;
            }
            let ib = ((tjb as i64 - tmb) / 2) as usize;
            let cg = clebsch_gordan(tja as i64, tma, tjb as i64, tmb, tj as i64, tm);
            if cg == 0.0 {
                continue;
            }
            for r in 0..da {
                let x = a[(r, ia)];
                if x == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for s in 0..db {
                    out[(r * db + s, col)] += x * b[(s, ib)] * cg;
                }
            }
        }
    }
    out
}

/// One `(J, path)` block of the sequentially coupled qubit basis.
#[derive(Debug, Clone)]
pub struct SchurBlock {
    /// Two-row diagram with `y1 - y2 = 2J`.
    pub label: Partition,
    pub twice_spin: usize,
    /// Twice the intermediate spins after coupling qubits `1..=k`, `k = 1..n`.
    pub path: Vec<usize>,
    /// Position of `path` among the paths sharing the same `J`.
    pub multiplicity_index: usize,
    /// `2^n x (2J+1)` isometry with orthonormal columns `|J M; path>`.
    pub isometry: CMatrix,
}

/// Spin-1/2 basis as a multiplet: columns `|+1/2>, |-1/2>`.
fn qubit_multiplet() -> CMatrix {
    identity(2)
}

/// Complete orthonormal basis of `(C^2)^{⊗n}` grouped by `(J, path)`.
///
/// Blocks are ordered by `J` descending, then by path in lexicographic order.
pub fn qubit_schur_blocks(n: usize) -> Result<Vec<SchurBlock>> {
    if n > MAX_SCHUR_QUBITS {
        return Err(Error::DimensionOverflow {
            dim: 1u128 << n,
            limit: 1 << MAX_SCHUR_QUBITS,
        });
    }
    if n == 0 {
        return Ok(vec![SchurBlock {
            label: Partition::new(vec![0, 0])?,
            twice_spin: 0,
            path: Vec::new(),
            multiplicity_index: 0,
            isometry: identity(1),
        }]);
    }
    let spin_half = qubit_multiplet();
    let mut current: Vec<(Vec<usize>, CMatrix)> = vec![(vec![1], spin_half.clone())];
    for _ in 1..n {
        let mut next = Vec::with_capacity(current.len() * 2);
        for (path, w) in &current {
            let tj = *path.last().expect("paths are non-empty");
            let mut targets = vec![tj + 1];
            if tj >= 1 {
                targets.push(tj - 1);
            }
            for tj_new in targets {
                let mut p = path.clone();
                p.push(tj_new);
                next.push((p, couple_multiplets(w, tj, &spin_half, 1, tj_new)));
            }
        }
        current = next;
    }
    current.sort_by(|(pa, _), (pb, _)| pb.last().cmp(&pa.last()).then_with(|| pa.cmp(pb)));

    let mut blocks = Vec::with_capacity(current.len());
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for (path, isometry) in current {
        let twice_spin = *path.last().unwrap();
        let idx = counts.entry(twice_spin).or_insert(0);
        blocks.push(SchurBlock {
            label: Partition::from_spin(n, twice_spin)?,
            twice_spin,
            path,
            multiplicity_index: *idx,
            isometry,
        });
        *idx += 1;
    }
    Ok(blocks)
}

/// Overlaps between the two three-qubit coupling schemes
/// `q0 = ((1,2),3)` and `q1 = (1,(2,3))`.
#[derive(Debug, Clone)]
pub struct RacahOverlaps {
    /// `C_J` keyed by `2J`, for the schemes whose intermediate pair is in the
    /// triplet (symmetric) state.
    pub coefficients: BTreeMap<usize, f64>,
    /// Full `8 x 8` matrix `<J M; q0 | J' M'; q1>`; rows and columns follow
    /// the labels in `row_labels` / `col_labels`.
    pub overlap: CMatrix,
    pub row_labels: Vec<CouplingLabel>,
    pub col_labels: Vec<CouplingLabel>,
    /// Largest modulus among overlaps with `J != J'` or `M != M'`.
    pub off_block_max: f64,
    /// Largest spread of the symmetric-pair overlap across `M` within a `J`.
    pub m_spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CouplingLabel {
    pub twice_spin: usize,
    pub twice_m: i64,
    /// Twice the intermediate two-qubit spin (1 for the triplet pair).
    pub twice_pair_spin: usize,
}

pub fn racah_overlaps() -> Result<RacahOverlaps> {
    let half = qubit_multiplet();
    let pair_multiplets = |tj_pair: usize| couple_multiplets(&half, 1, &half, 1, tj_pair);

    // q0: (12) first, then qubit 3 on the right.
    // q1: (23) first, then qubit 1 on the left.
    let mut q0 = Vec::new();
    let mut q1 = Vec::new();
    for tj_pair in [2usize, 0] {
        let pair = pair_multiplets(tj_pair);
        let mut targets = vec![tj_pair + 1];
        if tj_pair >= 1 {
            targets.push(tj_pair - 1);
        }
        for tj in targets {
            q0.push((tj_pair, tj, couple_multiplets(&pair, tj_pair, &half, 1, tj)));
            q1.push((tj_pair, tj, couple_multiplets(&half, 1, &pair, tj_pair, tj)));
        }
    }
    let flatten = |blocks: &[(usize, usize, CMatrix)]| {
        let mut labels = Vec::new();
        let mut cols = Vec::new();
        for (tj_pair, tj, w) in blocks {
            for c in 0..=*tj {
                labels.push(CouplingLabel {
                    twice_spin: *tj,
                    twice_m: *tj as i64 - 2 * c as i64,
                    twice_pair_spin: *tj_pair,
                });
                cols.push(w.column(c).into_owned());
            }
        }
        (labels, CMatrix::from_columns(&cols))
    };
    let (row_labels, b0) = flatten(&q0);
    let (col_labels, b1) = flatten(&q1);
    let overlap = b0.adjoint() * &b1;

    let mut off_block_max = 0.0f64;
    let mut per_j: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (r, lr) in row_labels.iter().enumerate() {
        for (c, lc) in col_labels.iter().enumerate() {
            let z = overlap[(r, c)];
            if lr.twice_spin != lc.twice_spin || lr.twice_m != lc.twice_m {
                off_block_max = off_block_max.max(z.norm());
            } else if lr.twice_pair_spin == 2 && lc.twice_pair_spin == 2 {
                per_j.entry(lr.twice_spin).or_default().push(z.re);
            }
        }
    }
    let mut coefficients = BTreeMap::new();
    let mut m_spread = 0.0f64;
    for (tj, values) in per_j {
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        m_spread = m_spread.max(hi - lo);
        coefficients.insert(tj, values[0]);
    }
    Ok(RacahOverlaps {
        coefficients,
        overlap,
        row_labels,
        col_labels,
        off_block_max,
        m_spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::max_abs_diff;
    use crate::symmetry::partition::dim_sn;

    #[test]
    fn spin_half_coefficients_match_closed_form() {
        // <j m-1/2; 1/2 1/2 | j+1/2 m> = sqrt((j + m + 1/2) / (2j + 1))
        for tj in 0..7i64 {
            for tm in (-(tj + 1)..=tj + 1).step_by(2) {
                let up = clebsch_gordan(tj, tm - 1, 1, 1, tj + 1, tm);
                let expect = if (tm - 1).abs() <= tj {
                    ((tj + tm + 1) as f64 / (2 * tj + 2) as f64).sqrt()
                } else {
                    0.0
                };
                assert!((up - expect).abs() < 1e-13, "tj={tj} tm={tm}");
                if tm.abs() < tj {
                    // <j m-1/2; 1/2 1/2 | j-1/2 m> = -sqrt((j - m + 1/2) / (2j + 1))
                    let down = clebsch_gordan(tj, tm - 1, 1, 1, tj - 1, tm);
                    let expect = -((tj - tm + 1) as f64 / (2 * tj + 2) as f64).sqrt();
                    assert!((down - expect).abs() < 1e-13, "tj={tj} tm={tm}");
                }
            }
        }
    }

    #[test]
    fn singlet_sign_convention() {
        let s = clebsch_gordan(1, 1, 1, -1, 0, 0);
        assert!((s - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        let s = clebsch_gordan(1, -1, 1, 1, 0, 0);
        assert!((s + 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn two_and_three_qubit_blocks() {
        let b2 = qubit_schur_blocks(2).unwrap();
        let shape: Vec<(usize, usize)> = b2.iter().map(|b| (b.twice_spin, b.isometry.ncols())).collect();
        assert_eq!(shape, vec![(2, 3), (0, 1)]);

        let b3 = qubit_schur_blocks(3).unwrap();
        let spins: Vec<usize> = b3.iter().map(|b| b.twice_spin).collect();
        assert_eq!(spins, vec![3, 1, 1]);
        assert_eq!(b3[1].path, vec![1, 0, 1]);
        assert_eq!(b3[2].path, vec![1, 2, 1]);
        assert_eq!(b3[2].multiplicity_index, 1);
        let paths_half = b3.iter().filter(|b| b.twice_spin == 1).count() as u128;
        assert_eq!(paths_half, dim_sn(&Partition::new(vec![2, 1]).unwrap()));
    }

    #[test]
    fn blocks_form_a_unitary() {
        for n in 1..=8 {
            let blocks = qubit_schur_blocks(n).unwrap();
            let cols: Vec<_> = blocks
                .iter()
                .flat_map(|b| b.isometry.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>())
                .collect();
            assert_eq!(cols.len(), 1 << n);
            let u = CMatrix::from_columns(&cols);
            let gram = u.adjoint() * &u;
            assert!(max_abs_diff(&gram, &identity(1 << n)) < 1e-9, "n={n}");
            for b in &blocks {
                let count = blocks.iter().filter(|x| x.twice_spin == b.twice_spin).count() as u128;
                assert_eq!(count, dim_sn(&b.label));
            }
        }
    }

    #[test]
    fn racah_coefficients() {
        let r = racah_overlaps().unwrap();
        assert!((r.coefficients[&3] - 1.0).abs() < 1e-12);
        assert!((r.coefficients[&1] - 0.5).abs() < 1e-12);
        assert!(r.off_block_max < 1e-9);
        assert!(r.m_spread < 1e-12);
    }
}
