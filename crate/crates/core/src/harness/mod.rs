//! Experiment plumbing around the core: table formats, reference tables,
//! persisted records, conjecture checks and parameter sweeps.

pub mod conjecture;
pub mod fixtures;
pub mod record;
pub mod render;
pub mod sweep;
