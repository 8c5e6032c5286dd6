//! Memory monitoring, size reporting, pattern generation and benchmarks.

pub mod bench;
pub mod monitor;
pub mod patterns;
pub mod size;
