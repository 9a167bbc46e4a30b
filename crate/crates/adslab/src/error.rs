//! Error type shared by all subsystems, with the CLI exit-code contract.

use thiserror::Error;

/// Everything that can go wrong across the laboratory.
#[derive(Debug, Error)]
pub enum AdsError {
    #[error("zero matrix cannot represent a boundary point")]
    ZeroMatrix,
    #[error("matrix is not null: |det| = {det:.3e} exceeds tolerance")]
    NotNull { det: f64 },
    #[error("points are not timelike related: |<p,q>| = {pairing:.6} > 1")]
    NotTimelikeRelated { pairing: f64 },
    #[error("geodesic velocity not normalized: q(v) = {q:.6}")]
    UnnormalizedVelocity { q: f64 },
    #[error("subspace is degenerate (rank < 3)")]
    DegenerateSubspace,
    #[error("degenerate quadruple: minimal separation {sep:.3e}")]
    DegenerateQuadruple { sep: f64 },
    #[error("circle map lift is not strictly monotone near theta = {theta:.6}")]
    NotMonotone { theta: f64 },
    #[error("{what} did not converge within {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("fixed points violate circular monotonicity; input does not look like a matched Fuchsian pair")]
    NotDiscreteLike,
    #[error("curve is not acausal: worst pairing margin {margin:.3e}")]
    NotAcausal { margin: f64 },
    #[error("no affine chart with validity margin {margin:.1e} found after {attempts} attempts")]
    ChartFailure { margin: f64, attempts: usize },
    #[error("fewer than 4 affinely independent points and input is not flagged planar")]
    DegenerateInput,
    #[error("surface is not spacelike at node {node}: det I = {det_i:.3e}")]
    NotSpacelike { node: usize, det_i: f64 },
    #[error("surface is not convex: kappa1*kappa2 = {product:.3e} at node {node}")]
    NotConvex { node: usize, product: f64 },
    #[error("numerical degeneracy in the matrix model: residual {residual:.3e}")]
    NumericalDegeneracy { residual: f64 },
    #[error("radial limit failed the Cauchy criterion: {defect:.3e} at ray {ray}")]
    NoLimit { ray: usize, defect: f64 },
    #[error("ideal boundaries disagree: max mismatch {mismatch:.3e}")]
    BoundaryMismatch { mismatch: f64 },
    #[error("equidistant surface undefined at |t| = {t:.6} (limit pi/2)")]
    DegenerateDistance { t: f64 },
    #[error("finite-difference stencil leaves the domain")]
    StencilOutOfDomain,
    #[error("curvature range certification failed: {reason}")]
    BadCurvatureRange { reason: String },
    #[error("reduction walk exceeded {cap} steps; generators do not look discrete")]
    ReductionFailure { cap: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl AdsError {
    /// Exit-code contract: 0 pass, 2 input, 3 chart, 4 boundary,
    /// 5 convergence, 1 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            AdsError::InvalidInput(_)
            | AdsError::ZeroMatrix
            | AdsError::NotNull { .. }
            | AdsError::NotMonotone { .. }
            | AdsError::DegenerateQuadruple { .. }
            | AdsError::BadCurvatureRange { .. } => 2,
            AdsError::ChartFailure { .. } | AdsError::DegenerateInput => 3,
            AdsError::BoundaryMismatch { .. } => 4,
            AdsError::NoConvergence { .. } => 5,
            _ => 1,
        }
    }
}
