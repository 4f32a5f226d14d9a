//! Criterion benchmarks for `qcb-core`; see `benches/`.
