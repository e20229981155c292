//! Criterion benchmarks for ncdisc; see `benches/`.
