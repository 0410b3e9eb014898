//! Configuration files and table output for the `patchable` binary.

pub mod config;
pub mod emit;
