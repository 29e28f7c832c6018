//! Benchmark-only crate; see `benches/state_sum.rs`.
