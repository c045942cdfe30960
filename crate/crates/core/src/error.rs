use thiserror::Error;

use crate::complex::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus must be positive")]
    NonPositiveModulus,
    #[error("value does not fit in a binary64 float")]
    Overflow,
    #[error("malformed rational component {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid complex: {0}")]
    Invalid(ValidationReport),
    #[error("vertex class angle sum {angle} is not a multiple of 2π")]
    ConeAngleNotMultipleOf2Pi { angle: f64 },
    #[error("Euler characteristic gives genus {euler} but cone orders give {orders}")]
    EulerMismatch { euler: i64, orders: i64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("vertex class {0} is not a cone point")]
    NotAConePoint(usize),
    #[error("complex has no cone point")]
    NoConePoint,
    #[error("wedge {wedge} does not contain the requested direction")]
    AmbiguousWedge { wedge: usize },
    #[error("trace left the face unexpectedly (corrupt complex)")]
    Lost,
    #[error("saddle connection search exceeded its budget of {budget} windows")]
    BudgetExceeded { budget: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurgeryError {
    #[error("saddle connection is not closed")]
    NotClosed,
    #[error("segment is not a twin of the saddle connection")]
    NotATwin,
    #[error("twin contains a cone point in its interior")]
    TwinHitsSaddle,
    #[error("twin ends at a cone point")]
    TwinEndsAtSaddle,
    #[error("twin is not embedded or meets the saddle connection")]
    TwinNotEmbedded,
    #[error("angle between twin and saddle connection is {half_turns}π, not 2π")]
    AngleNot2Pi { half_turns: usize },
    #[error("surgery disconnected the surface")]
    DisconnectedResult,
    #[error("surgery produced an invalid complex: {0}")]
    InvalidResult(ValidationReport),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("complex is not in the octagon family: {0}")]
    NotInOctFamily(String),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("position lies on a family boundary")]
    BoundaryCase,
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Field(#[from] FieldError),
}
