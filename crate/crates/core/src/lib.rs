//! Exact flat-surface kernel for the fake octagon family.
//!
//! Surfaces are glued polygons with coordinates in Q(√2). The crate traces
//! straight lines, finds saddle connections, performs twin surgeries and
//! compares the results with closed-form normal forms.

pub mod complex;
pub mod error;
pub mod families;
pub mod field;
pub mod geom;
pub mod io;
pub mod mesh;
pub mod octagon;
pub mod period;
pub mod render;
pub mod search;
pub mod surgery;
pub mod trace;

pub use complex::{
    Corner, EdgeRef, Face, FlatComplex, Gluing, Topology, ValidationReport, VertexClass, VertexRef, Violation,
};
pub use error::{ComplexError, FieldError, ModelError, SurgeryError, TraceError};
pub use field::QSqrt2;
pub use geom::{Point2, Vec2};
