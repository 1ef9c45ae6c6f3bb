//! Benchmark harness for the excursion toolkit. See `benches/pipeline.rs`.

pub use excursion_core;
