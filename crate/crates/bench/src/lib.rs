//! Criterion benchmarks for the distance computations; see `benches/`.
