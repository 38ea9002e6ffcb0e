//! Criterion benchmarks for `foresight-core`; see `benches/core.rs`.
