//! Criterion benchmarks for `bpa-core`; see `benches/model.rs`.
