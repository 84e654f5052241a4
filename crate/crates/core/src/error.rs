use thiserror::Error;

use crate::ncpoly::{Var, Word};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("variable index {index} exceeds mu = {mu}")]
    VariableOutOfRange { index: usize, mu: usize },
    #[error("malformed word {0:?}")]
    BadWord(String),
    #[error("no matrix assigned to {0:?}")]
    MissingAssignment(Var),
    #[error("assigned matrix for {0:?} is not hermitian")]
    NotHermitianAssignment(Var),
    #[error("evaluation point size mismatch: expected {expected}x{expected}, found {found:?}")]
    PointSizeMismatch { expected: usize, found: (usize, usize) },
    #[error("evaluation point has no assignments")]
    EmptyPoint,
    #[error("block layout is empty or ragged")]
    EmptyBlock,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error("polynomial is not homogeneous of degree two in the second class (word {0:?})")]
    NotQuadratic(Word),
    #[error("degree {degree} in the requested class exceeds two")]
    DegreeTooHigh { degree: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is indefinite: smallest eigenvalue {min_eig:.3e} below -{tol:.1e}")]
    Indefinite { min_eig: f64, tol: f64 },
    #[error("completion precondition violated: {0}")]
    CompletionPrecondition(String),
    #[error("block sizes are inconsistent: {0}")]
    Shape(String),
}

/// Why a certification attempt did not produce a certificate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("input polynomial is not hermitian")]
    NotHermitian,
    #[error("degree {degree} in the second class exceeds two; no partial convexity certificate exists")]
    DegreeBound { degree: usize },
    #[error("polynomial contains words outside the admissible set: {offending:?}")]
    Structural { offending: Vec<Word> },
    #[error("Gram search not certified: {diagnostic}")]
    NotCertified { diagnostic: String },
    #[error("certificate failed verification (residual {residual:.3e}): {reason}")]
    VerificationFailed { residual: f64, reason: String },
    #[error("this certifier needs mu = 1, got mu = {0}")]
    UnsupportedMu(usize),
    #[error("certificate mode does not match the requested check")]
    ModeMismatch,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

impl CertifyError {
    /// `true` for failures that prove non-convexity (degree bound and structure),
    /// as opposed to an inconclusive numerical search.
    pub fn is_definitive(&self) -> bool {
        matches!(
            self,
            CertifyError::DegreeBound { .. } | CertifyError::Structural { .. }
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("polynomial is not hermitian")]
    NotHermitian,
    #[error("block sizes must be positive: {0}")]
    BadSize(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
