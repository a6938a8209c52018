//! File formats and command-line front end for `eqsets-core`.

pub mod cli;
pub mod format;

pub use eqsets_core as core;
