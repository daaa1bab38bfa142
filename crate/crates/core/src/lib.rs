//! Special linear systems with fat base points on projective spaces and on
//! products of projective spaces.
//!
//! The crate computes virtual and expected dimensions, classifies candidate
//! special effect varieties, runs bounded classification scans, and checks
//! speciality against an exact interpolation-rank oracle over a prime field.

pub mod combinatorics;
pub mod effect_varieties;
pub mod error;
pub mod json;
pub mod oracle;
pub mod search;
pub mod suites;
pub mod systems;

pub use effect_varieties::{EffectVariety, H1Report, SevReport};
pub use error::{Error, Result};
pub use oracle::{OracleConfig, OracleResult, PrimeField};
pub use search::ScanRecord;
pub use systems::{DimReport, FatPointGroup, LinearSystem, Space};
