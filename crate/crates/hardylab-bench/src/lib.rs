//! Shared sizes for the criterion benches in benches/. The workload itself
//! lives there; this crate exists so the benches version together with the
//! core library.

/// Truncation order used by the full-size operator benches.
pub const BENCH_ORDER: usize = 256;

/// Smaller order for the benches dominated by dense eigendecompositions.
pub const SMALL_ORDER: usize = 128;
