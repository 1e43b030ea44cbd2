//! Criterion benchmarks for the flow and theory routines; see `benches/`.
