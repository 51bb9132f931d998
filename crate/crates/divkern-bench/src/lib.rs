//! Criterion benchmarks for divkern live in `benches/`; this crate has no library code.
