//! Benchmarks for the permanent, the evolution engines and the closed-form sweeps live in `benches/`.
