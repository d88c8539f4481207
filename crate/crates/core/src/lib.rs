//! Kauffman bracket and framed Khovanov homology for unoriented framed
//! links and tangles presented as sliced tile diagrams.
//!
//! The crate computes the bracket of a diagram three independent ways
//! (enhanced-state sum, graded Euler characteristic of the chain complex,
//! R-matrix tensor contraction), builds the bigraded chain complex whose
//! differential resmooths one crossing at a time, and extracts integral
//! homology via Smith normal form. Diagrams are read from a plain-text
//! row format, see [`diagram::TangleDiagram::parse`].

pub mod complex;
pub mod diagram;
pub mod homology;
pub mod ring;
pub mod rmatrix;
pub mod states;
pub mod statesum;

pub use complex::{
    build_complex, verify_dsquare, Boundary, ChainComplex, FrobeniusRule, FrobeniusTable,
    Generator, Matrix,
};
pub use diagram::{EdgeId, KinkSign, TangleDiagram, Tile};
pub use homology::{
    compare_homology, homology, smith_normal_form, BigradedHomology, HomologyGroup,
    SmithDecomposition,
};
pub use ring::{GaussianInt, HalfInt, LaurentPoly};
pub use rmatrix::{
    bracket_tensor, bracket_tensor_marked, check_matrix_identities, open_tensor_report,
    TensorEntry, WeightTable,
};
pub use states::{
    enumerate_markers, smooth, BoundaryDir, Component, ComponentKind, EnhancedState,
    KauffmanState, Marker, MarkerAssignment,
};
pub use statesum::{
    bracket_state_sum, bracket_via_ranks, kink_factor, kink_factor_check, loop_value,
    BracketResult,
};

/// Crate-wide error type. Input problems carry positions; `NotAComplex`
/// signals an engine bug rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("row {row}: needs {found} input strands, previous row provides {expected}")]
    ArityMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: unknown tile token `{token}`")]
    UnknownToken { line: usize, token: String },
    #[error("diagram has no rows")]
    EmptyDiagram,
    #[error("strand {strand} is out of range: diagram has {arity} top strands")]
    StrandOutOfRange { strand: usize, arity: usize },
    #[error("operation is defined for closed diagrams only")]
    ClosedOnly,
    #[error("boundary does not square to zero at (2p, q) = ({p2}, {q})")]
    NotAComplex { p2: i64, q: i64 },
    #[error("cannot parse polynomial: {0}")]
    PolyParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
