//! Benchmark harness for the core kernels (see `benches/`).
