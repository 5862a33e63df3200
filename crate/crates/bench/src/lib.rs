//! Criterion benchmarks for the mflab kernels; see `benches/`.
