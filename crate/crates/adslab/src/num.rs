//! Numeric policy: the tolerance bands used across the laboratory.
//!
//! The underlying mathematics is exact; floating point requires explicit
//! bands. All residual thresholds funnel through one record so that tests
//! and the CLI share the same numbers.

/// Tolerance record. `Default` gives the values used by the test suites.
#[derive(Debug, Clone, Copy)]
pub struct NumericPolicy {
    /// |q(x) + 1| band for points claimed to lie on the quadric.
    pub manifold_residual: f64,
    /// |q(x)| band for null (boundary) representatives.
    pub null_residual: f64,
    /// Causal classification band: |q(v)| below this means lightlike.
    pub causal_tol: f64,
    /// Tangency band |<base, v>|.
    pub tangency_tol: f64,
    /// Chart validity margin: projective coordinate must stay this far from 0.
    pub chart_margin: f64,
    /// Hull convexity band (signed distance of vertices to face planes).
    pub hull_convexity: f64,
    /// Planarity band for degenerate (totally geodesic) hull detection.
    pub planarity_tol: f64,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        NumericPolicy {
            manifold_residual: 1e-10,
            null_residual: 1e-12,
            causal_tol: 1e-12,
            tangency_tol: 1e-10,
            chart_margin: 1e-6,
            hull_convexity: 1e-9,
            planarity_tol: 1e-9,
        }
    }
}

/// Absolute-difference check used throughout the test suites.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Distance on the circle R/2pi.
pub fn circle_dist(a: f64, b: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut d = (a - b).rem_euclid(two_pi);
    if d > std::f64::consts::PI {
        d = two_pi - d;
    }
    d
}

/// Reduce an angle to [0, 2pi).
pub fn wrap_angle(theta: f64) -> f64 {
    theta.rem_euclid(std::f64::consts::TAU)
}
