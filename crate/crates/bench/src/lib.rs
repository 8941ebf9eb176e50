//! Criterion benchmarks for pest-lab live under `benches/`.
