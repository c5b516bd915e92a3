//! Criterion benchmarks for the arqft kernels; see `benches/`.
