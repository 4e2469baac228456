use thiserror::Error;

use crate::exact::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is singular")]
    Singular,

    #[error("signature ({found_pos},{found_neg}) does not match required ({want_pos},{want_neg})")]
    WrongSignature { want_pos: usize, want_neg: usize, found_pos: usize, found_neg: usize },

    #[error("Gram diagonal entry {index} is {value}, expected 1")]
    NonUnitDiagonal { index: usize, value: Rational },

    #[error("vector norm is {found}, expected {expected}")]
    WrongNorm { expected: Box<Rational>, found: Box<Rational> },

    #[error("points are not on the same sheet: -(v,w) = {0} < 1")]
    NotSameSheet(Rational),

    #[error("hyperplanes intersect: |(e,e')| = {0} < 1")]
    IntersectingHyperplanes(Rational),

    #[error("index {index} out of range for {len} generators")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("weight {0} is not real (g^ii <= 0)")]
    NonRealWeight(usize),

    #[error("no real weights: the initial cluster is empty")]
    NoRealWeights,

    #[error("normalized weights {i} and {j} have (w_i, w_j) > -1: not a packing dual")]
    NotPackingDual { i: usize, j: usize },

    #[error("normalization of weight {0} is irrational relative to the reference weight")]
    IrrationalNormalization(usize),

    #[error("curvatures violate the Soddy identity: residual {residual}")]
    SoddyViolation { residual: Rational },

    #[error("cluster Gram mismatch at ({i},{j}): expected {expected}, found {found}")]
    GramMismatch { i: usize, j: usize, expected: Box<Rational>, found: Box<Rational> },

    #[error("polytope is not of level <= 2; its orbit is not a packing")]
    NotPackingPolytope,

    #[error("cluster is degenerate (non-real weights); {0}")]
    DegenerateCluster(String),

    #[error("cluster has no curvature functional")]
    NoCurvature,

    #[error("packing is unbounded: a counting region is required")]
    UnboundedPacking,

    #[error("cluster budget of {limit} exceeded; resumable checkpoint available")]
    BudgetExceeded { limit: usize, checkpoint: Box<crate::orbit::Checkpoint> },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("too few points for a fit: need {needed}, found {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("fit window reaches T = {window_hi} but counts are only complete up to {complete_to}")]
    TruncatedWindow { window_hi: f64, complete_to: f64 },

    #[error("orbit is finite ({0} elements); the group is elementary on this class")]
    FiniteOrbit(usize),

    #[error("unknown model {0:?}")]
    UnknownModel(String),

    #[error("model failed verification: {0}")]
    UnverifiedModel(String),

    #[error("basis matrix has a non-integer entry at ({0},{1})")]
    NonIntegerBasis(usize, usize),

    #[error("basis has determinant {0}; a full-lattice basis must be unimodular")]
    NotUnimodular(Rational),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors that signal incomplete enumeration data rather than a
    /// bad input or a violated mathematical precondition.
    pub fn is_truncation(&self) -> bool {
        matches!(self, Error::TruncatedWindow { .. } | Error::BudgetExceeded { .. })
    }

    /// True for input-shape problems (parsing, dimensions, names).
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::DimensionMismatch { .. }
                | Error::NotSquare { .. }
                | Error::UnknownModel(_)
                | Error::InvalidArgument(_)
                | Error::Checkpoint(_)
        )
    }
}
