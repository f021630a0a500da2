//! Criterion benchmarks for ddw-core; see `benches/`.
