//! Fixtures shared by the benchmarks.

use uql_core::datasets::random_mixed_state;
use uql_core::mc::chunk_rng;
use uql_core::CMatrix;

/// Full-rank Hermitian matrix of size `dim`, reproducible from `seed`.
pub fn hermitian(dim: usize, seed: u64) -> CMatrix {
    random_mixed_state(dim, &mut chunk_rng(seed, 0)).into_matrix()
}
