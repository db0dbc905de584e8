//! Criterion benchmarks for the quatloci kernels; see `benches/kernels.rs`.
