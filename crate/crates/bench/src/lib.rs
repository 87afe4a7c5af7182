//! Benchmarks for the transducer live in `benches/`.
