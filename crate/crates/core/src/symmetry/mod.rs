//! Representation-theoretic machinery: partitions and irrep dimensions,
//! permutation operators, symmetric projectors, qubit Schur blocks and Racah
//! overlaps.

mod invariant;
mod partition;
mod permutation;
mod schur;

pub use invariant::{highest_weight_blocks, invariant_blocks, qubit_invariant_blocks, InvariantBlock};
pub use partition::{binomial, dim_sn, dim_sud, partitions, sym_dim, Partition};
pub use permutation::{
    conjugate_by_permutation, permutation_average, permutation_index_map, permutation_op,
    sym_projector, Permutation, DENSE_DIM_LIMIT, EXPLICIT_AVERAGE_MAX_N,
};
pub use schur::{
    clebsch_gordan, couple_multiplets, qubit_schur_blocks, racah_overlaps, CouplingLabel,
    RacahOverlaps, SchurBlock, MAX_SCHUR_QUBITS,
};
