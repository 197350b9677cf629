//! Criterion benchmarks for `qpl-core`; see `benches/`.
