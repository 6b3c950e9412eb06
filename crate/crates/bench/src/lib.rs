//! Benchmarks for `jordpack-core`. See `benches/`.
