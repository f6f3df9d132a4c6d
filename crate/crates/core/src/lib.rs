//! Universal (symmetry-respecting) measurement strategies for structured
//! quantum datasets.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: dense complex linear algebra.
//! - [`symmetry`]: partitions, irrep dimensions, permutation operators,
//!   symmetric projectors and qubit Schur blocks.
//! - [`datasets`]: effective (Haar-averaged) states of structured datasets.
//! - [`discrimination`]: minimum-error discrimination with optimality
//!   certificates.
//! - [`tasks`]: end-to-end learning tasks built on the above.

pub mod datasets;
pub mod discrimination;
pub mod error;
pub mod mc;
pub mod numerics;
pub mod symmetry;
pub mod tasks;

pub use datasets::{ChangePointCase, Ensemble, ProgramHypothesis, QuantumState};
pub use discrimination::{DiscriminationResult, Povm};
pub use error::{Error, Result};
pub use numerics::{CMatrix, CVector, SubsystemShape};
pub use symmetry::{Partition, SchurBlock};
pub use tasks::TaskReport;
