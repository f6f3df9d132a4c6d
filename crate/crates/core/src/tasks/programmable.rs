//! Programmable discrimination: which program block does the data match?

use crate::datasets::{programmable_effective, Ensemble, ProgramHypothesis, QuantumState};
use crate::discrimination::helstrom_binary;
use crate::error::Result;
use crate::numerics::{trace, CMatrix};
use crate::symmetry::{qubit_schur_blocks, racah_overlaps};

use super::TaskReport;

/// `½(1 − 1/(2√3))`, the optimal error for one copy in each register.
pub fn programmable_closed_form() -> f64 {
    0.5 * (1.0 - 1.0 / (2.0 * 3f64.sqrt()))
}

/// `"3/2"` for `twice = 3`, `"1"` for `twice = 2`.
pub(crate) fn spin_label(twice: i64) -> String {
    if twice % 2 == 0 {
        format!("{}", twice / 2)
    } else {
        format!("{twice}/2")
    }
}

/// Helstrom error between the two effective states with equal priors.
pub fn programmable_error(n1: usize, m: usize, n3: usize, d: usize) -> Result<TaskReport> {
    let a = programmable_effective(n1, m, n3, ProgramHypothesis::A, d)?;
    let b = programmable_effective(n1, m, n3, ProgramHypothesis::B, d)?;
    let ens = Ensemble::uniform(vec![a, b])?;
    let h = helstrom_binary(&ens)?;
    let mut report = TaskReport::new("programmable", h.error_probability())
        .param("n1", n1 as f64)
        .param("m", m as f64)
        .param("n3", n3 as f64)
        .param("d", d as f64)
        .extra("success", h.success_probability);
    if (n1, m, n3, d) == (1, 1, 1, 2) {
        report.analytic = Some(programmable_closed_form());
    }
    Ok(report)
}

/// Error of the two-stage strategy (measure `J`, then Helstrom) for one
/// qubit per register.
///
/// `numeric` composes `p_J = μ_J/6` with `P_e^J = [1 − √(1 − C_J²)]/2` using
/// the computed recoupling overlaps `C_J`; extras hold the per-`J` pieces and
/// the Helstrom error measured inside each `(J, M)` sector.
pub fn programmable_block_analysis() -> Result<TaskReport> {
    let racah = racah_overlaps()?;
    let sigma0 = programmable_effective(1, 1, 1, ProgramHypothesis::A, 2)?;
    let sigma1 = programmable_effective(1, 1, 1, ProgramHypothesis::B, 2)?;
    let blocks = qubit_schur_blocks(3)?;

    let mut report = TaskReport::new("programmable_blocks", 0.0)
        .param("n1", 1.0)
        .param("m", 1.0)
        .param("n3", 1.0)
        .param("d", 2.0);
    let mut total = 0.0;
    let mut sector_total = 0.0;
    for (&tj, &cj) in &racah.coefficients {
        let label = spin_label(tj as i64);
        let columns: Vec<&CMatrix> = blocks
            .iter()
            .filter(|b| b.twice_spin == tj)
            .map(|b| &b.isometry)
            .collect();
        // Projector onto total spin J: every M of every path.
        let dim = 8;
        let mut pj = CMatrix::zeros(dim, dim);
        for w in &columns {
            pj += *w * w.adjoint();
        }
        let p_j = trace(&(&pj * sigma0.matrix())).re;
        let err_j = 0.5 * (1.0 - (1.0 - cj * cj).sqrt());
        total += p_j * err_j;
        report = report
            .extra(&format!("c_{label}"), cj)
            .extra(&format!("p_{label}"), p_j)
            .extra(&format!("error_{label}"), err_j);

        for col in 0..=tj {
            let vs: Vec<_> = columns.iter().map(|w| w.column(col).into_owned()).collect();
            let pi = vs.iter().fold(CMatrix::zeros(dim, dim), |acc, v| acc + v * v.adjoint());
            let r0 = &pi * sigma0.matrix() * &pi;
            let r1 = &pi * sigma1.matrix() * &pi;
            let (w0, w1) = (trace(&r0).re, trace(&r1).re);
            let ens = Ensemble::new(
                vec![w0 / (w0 + w1), w1 / (w0 + w1)],
                vec![
                    QuantumState::single(r0.unscale(w0))?,
                    QuantumState::single(r1.unscale(w1))?,
                ],
            )?;
            let err = helstrom_binary(&ens)?.error_probability();
            sector_total += 0.5 * (w0 + w1) * err;
            let twice_m = tj as i64 - 2 * col as i64;
            report = report.extra(&format!("sector_error_{label}_m_{}", spin_label(twice_m)), err);
        }
    }
    report.numeric = total;
    report.analytic = Some(programmable_closed_form());
    Ok(report.extra("sector_total", sector_total))
}
