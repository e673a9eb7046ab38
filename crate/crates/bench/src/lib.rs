//! Criterion benchmarks for `cicy-core`; see `benches/pipeline.rs`.
