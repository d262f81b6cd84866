//! Benchmark-only crate; see `benches/dnp.rs`.
