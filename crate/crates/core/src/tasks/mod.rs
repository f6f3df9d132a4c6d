//! End-to-end learning tasks.

mod change_point;
mod clustering;
mod distance;
mod estimation;
mod overlap;
mod programmable;
mod report;
mod supervised;

pub use change_point::{
    change_point_known_average, change_point_success, change_point_two_closed_form,
    known_pair_trial, overlap_pair,
};
pub use clustering::clustering_success;
pub use distance::{hs_distance_sq, hs_swap_estimate, swap_expectation, swap_operator};
pub use estimation::{
    estimation_fidelity_closed, estimation_fidelity_exact, estimation_fidelity_mc, estimation_trial,
};
pub use overlap::{
    overlap_block_distribution, overlap_block_distribution_dense, overlap_mle,
    simulate_overlap_histogram, BlockDistribution, Histogram,
};
pub use programmable::{programmable_block_analysis, programmable_closed_form, programmable_error};
pub use report::TaskReport;
pub use supervised::{split_error, split_trial, split_vs_global};
