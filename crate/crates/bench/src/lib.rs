//! Fixed inputs shared by the benchmarks.

use sev_core::LinearSystem;

const ORACLE_FIXTURES: [&str; 6] = [
    "P2:d=4:2x5",
    "P4:d=3:2x7",
    "P3:d=6:4x3",
    "P4:d=4:2x14",
    "P3:d=9:6,4x8",
    "P1xP1xP1:d=4,4,4:2x30",
];

/// Named systems of increasing matrix size for the rank oracle.
pub fn oracle_fixtures() -> Vec<(&'static str, LinearSystem)> {
    ORACLE_FIXTURES
        .into_iter()
        .map(|s| (s, s.parse().expect("fixture parses")))
        .collect()
}
