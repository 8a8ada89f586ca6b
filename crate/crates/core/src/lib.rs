//! Elliptic curve codes over finite fields: curves, group structure,
//! Riemann-Roch spaces, generator matrices and MDS checks.

pub mod field;
pub mod curve;
pub mod group;
pub mod places;
pub mod code;
pub mod constructions;
pub mod cli;
