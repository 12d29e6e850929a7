//! Shared fixtures for the criterion benches.

use msd_core::catalog::builtin;
use msd_core::{DistillationMap, StabilizerCode};

/// Built-in code by name; panics on an unknown name.
pub fn code(name: &str) -> StabilizerCode {
    builtin(name).expect("built-in code")
}

pub fn map(name: &str) -> DistillationMap {
    DistillationMap::build(&code(name)).expect("map builds")
}

pub const PROTOCOL_CODES: [&str; 2] = ["15-1-3-canonical", "14-2-2-canonical"];
