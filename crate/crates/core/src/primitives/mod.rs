//! Subroutines shared by the pipeline stages.

pub mod hitting;
pub mod spanner;
pub mod sparse;
pub mod zero;

pub use hitting::hitting_set;
pub use spanner::{brute_force_apsp, logn_apsp, spanner, spanner_apsp, SpannerResult, SpannerVariant};
pub use sparse::{matmul_rounds, sparse_minplus_mul};
pub use zero::{compress_zero, lift_compressed, ZeroCompression};
