//! Matrix-valued polynomials in freely noncommuting variables, and
//! certificates and counterexamples for two kinds of partial convexity:
//! convexity in `x` with `a` as parameters, and xy-convexity.

pub mod certify;
pub mod error;
pub mod generic;
pub mod linalg;
pub mod ncpoly;
pub mod sampler;
pub mod sdp;
pub mod structure;

pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;

pub use certify::{
    certify_a2, certify_xy, certify_xy_sdp_mu1, schur_pencil, verify_certificate, CertifyOptions,
    ConvexityCertificate, SchurPencil,
};
pub use error::{CertifyError, LinalgError, PolyError, SamplerError, StructureError};
pub use ncpoly::{EvaluationPoint, FreePolynomial, Mode, Var, VarClass, Word};
pub use sampler::{falsify, Counterexample, Witness};
pub use sdp::{solve_feasibility, SdpOutcome, SdpProblem, SdpStatus};
pub use num_complex::Complex64;
