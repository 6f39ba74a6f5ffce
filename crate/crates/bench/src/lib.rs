// Benchmarks live in benches/; this crate exports nothing.
