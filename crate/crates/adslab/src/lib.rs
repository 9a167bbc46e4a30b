//! adslab: a numerical laboratory for three-dimensional anti-de Sitter geometry.
//!
//! The crate is organized around five subsystems:
//!
//! * [`ads`] — Lorentzian linear algebra for R^{2,2}: the quadric model of
//!   AdS^{2,1}, the 2x2-matrix model, the boundary RP^1 x RP^1, isometries,
//!   causality, geodesics and timelike distance.
//! * [`circle`] — circle homeomorphisms and their distortion: quasi-symmetry
//!   constants, cross-ratio norms, three-point normalization, conformal
//!   barycentric extension, Fuchsian groups and equivariant boundary maps.
//! * [`hull`] — quasicircles as graphs in the ideal boundary, their 3D convex
//!   hulls in an affine chart, future/past boundary splitting, and width.
//! * [`surface`] — spacelike convex surfaces: fundamental forms, left/right
//!   hyperbolic projections, boundary extensions and gluing maps.
//! * [`solver`] — prescribed-curvature conformal metrics on the disc: the
//!   Liouville equation, curvature blending, group-invariant extension, and
//!   derivative-bound diagnostics.
//!
//! The [`experiments`] module drives the five `adslab` subcommands
//! (`qs`, `hull`, `glue`, `solve`, `pipeline`) and produces machine-readable
//! reports; every check in a report carries its tolerance and a provenance
//! tag. See the `examples/` directory for one runnable example per
//! capability.
//!
//! # Conventions
//!
//! The quadratic form is `q(x) = x1^2 + x2^2 - x3^2 - x4^2`. The matrix model
//! sends `x` to `[[x3+x1, x2-x4], [x2+x4, x3-x1]]`, so that `-det` corresponds
//! to `q` and the quadric `q = -1` maps onto the unimodular group. Boundary
//! points are `(Im M, Ker M)` pairs of projective lines; an isometry `(A, B)`
//! acts as `X -> A X B^{-1}` and acts on the boundary factors by the Mobius
//! actions of `A` and `B`. The circle angle `theta` corresponds to the real
//! projective coordinate `-cot(theta/2)`, and the hyperbolic plane is the
//! upper half-plane with basepoint `i`.

pub mod ads;
pub mod circle;
pub mod error;
pub mod experiments;
pub mod expr;
pub mod hull;
pub mod io;
pub mod mat2;
pub mod num;
pub mod report;
pub mod rp1;
pub mod solver;
pub mod surface;

pub use error::AdsError;
pub use mat2::Mat2;
pub use num::NumericPolicy;
pub use rp1::RP1;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, AdsError>;
