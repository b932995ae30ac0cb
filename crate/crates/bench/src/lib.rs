//! Criterion benchmarks for the numerical kernels of `cdl-core`; see `benches/`.
