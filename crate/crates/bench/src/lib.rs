//! Criterion benchmarks for the gectag pipeline live in `benches/`.
