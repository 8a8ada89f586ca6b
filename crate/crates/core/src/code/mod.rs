//! Elliptic codes `C(E, D, G)`: Riemann-Roch bases, generator matrices and
//! MDS checks.

mod function;
mod mds;
mod riemann_roch;
mod spec;

use thiserror::Error;

use crate::curve::CurveError;
use crate::field::FieldError;
use crate::group::GroupError;
use crate::places::PlaceError;

pub use function::{Factor, FunctionRep, LineFn};
pub use mds::{
    mds_combinatorial, mds_matrix, minimum_distance, MatrixMode, Verdict, Witness, DEFAULT_MINOR_BUDGET,
    DISTANCE_BUDGET,
};
pub use riemann_roch::{check_divisor, miller_reduce, rr_basis};
pub use spec::{generator_matrix, CodeSpec, CodeSpecJson, GenMatrix, MatrixHeader, Provenance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("function has a pole at an evaluation point")]
    PoleAtPoint,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate reduction step: {0}")]
    DegenerateStep(String),
    #[error("places of different non-rational degrees in G are not supported")]
    MixedPlaceDegrees,
    #[error("invalid code: {0}")]
    InvalidSpec(String),
    #[error("echelon form of the generator matrix is not defined over the base field")]
    EchelonNotRational,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Place(#[from] PlaceError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
