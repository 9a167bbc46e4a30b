//! Points of AdS^{2,1} and of its ideal boundary RP^1 x RP^1.

use super::{from_matrix, q22, to_matrix, Vec22};
use crate::error::AdsError;
use crate::mat2::{Mat2, ROT90};
use crate::num::NumericPolicy;
use crate::rp1::RP1;
use crate::Result;

/// A point of the projective model: a q = -1 representative together with a
/// flag recording whether the stored representative is the canonical one.
///
/// Canonicalization forces the first nonzero coordinate, in the order
/// (x4, x3, x1, x2), to be positive, making equality and hashing
/// deterministic. Operations that evolve points (geodesics) keep the raw
/// representative and leave the flag unset, so that double-cover-sensitive
/// diagnostics can see which sheet a computation landed on.
#[derive(Debug, Clone, Copy)]
pub struct AdsPoint {
    pub rep: Vec22,
    pub canonical: bool,
}

impl AdsPoint {
    /// Accepts a representative with |q(rep) + 1| within the manifold band.
    pub fn new(rep: Vec22) -> Result<Self> {
        let policy = NumericPolicy::default();
        Self::with_policy(rep, &policy)
    }

    pub fn with_policy(rep: Vec22, policy: &NumericPolicy) -> Result<Self> {
        if !rep.is_finite() {
            return Err(AdsError::InvalidInput("non-finite coordinates".into()));
        }
        let q = q22(&rep);
        if (q + 1.0).abs() > 1e-6 {
            return Err(AdsError::InvalidInput(format!(
                "representative has q = {q:.6}, not -1"
            )));
        }
        // renormalize exactly onto the quadric, then check the declared band
        let rep = rep.scale(1.0 / (-q).sqrt());
        debug_assert!((q22(&rep) + 1.0).abs() <= policy.manifold_residual);
        Ok(AdsPoint {
            rep,
            canonical: false,
        })
    }

    /// Projection of a point given in an affine chart x4 = 1.
    pub fn from_chart_x4(c: [f64; 3]) -> Result<Self> {
        let v = Vec22::new(c[0], c[1], c[2], 1.0);
        let q = q22(&v);
        if q >= -1e-14 {
            return Err(AdsError::InvalidInput(format!(
                "chart point has q = {q:.3e}; not inside AdS"
            )));
        }
        AdsPoint::new(v.scale(1.0 / (-q).sqrt()))
    }

    /// The canonical (sign-fixed) representative.
    pub fn canonicalize(&self) -> AdsPoint {
        let r = &self.rep;
        let lead = [r.x4, r.x3, r.x1, r.x2]
            .into_iter()
            .find(|v| v.abs() > 1e-13)
            .unwrap_or(1.0);
        let rep = if lead < 0.0 { r.scale(-1.0) } else { *r };
        AdsPoint {
            rep,
            canonical: true,
        }
    }

    pub fn matrix(&self) -> Mat2 {
        to_matrix(&self.rep)
    }

    pub fn from_matrix(m: &Mat2) -> Result<Self> {
        AdsPoint::new(from_matrix(m))
    }

    /// Projective equality within `tol` (compares canonical representatives).
    pub fn approx_eq(&self, other: &AdsPoint, tol: f64) -> bool {
        let a = self.canonicalize().rep;
        let b = other.canonicalize().rep;
        a.sub(&b).norm() <= tol
    }
}

/// A point of the ideal boundary, as the (image, kernel) pair of projective
/// lines of a null matrix.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryPoint {
    pub left: RP1,
    pub right: RP1,
}

impl BoundaryPoint {
    pub fn new(left: RP1, right: RP1) -> Self {
        BoundaryPoint { left, right }
    }

    /// Graph point (theta, f_theta) in circle-angle coordinates.
    pub fn from_angles(theta_left: f64, theta_right: f64) -> Self {
        BoundaryPoint {
            left: RP1::from_circle_angle(theta_left),
            right: RP1::from_circle_angle(theta_right),
        }
    }

    /// A null representative in R^{2,2} realizing this (image, kernel) pair.
    ///
    /// With u spanning the image and r spanning the kernel, the matrix
    /// u (J r)^T has image [u] and kernel [r]; it is nonzero because J r is
    /// orthogonal to r.
    pub fn null_rep(&self) -> Vec22 {
        let u = self.left;
        let w = self.right.apply(&ROT90); // J r
        let m = Mat2::new(
            u.v1 * w.v1,
            u.v1 * w.v2,
            u.v2 * w.v1,
            u.v2 * w.v2,
        );
        let v = from_matrix(&m);
        v.scale(1.0 / v.norm())
    }

    pub fn chordal_dist(&self, other: &BoundaryPoint) -> f64 {
        self.left
            .chordal_dist(&other.left)
            .max(self.right.chordal_dist(&other.right))
    }
}

/// Image and kernel of a projectively-null matrix, as a boundary point.
pub fn boundary_to_rp1pair(m: &Mat2) -> Result<BoundaryPoint> {
    let norm = m.norm();
    if norm < 1e-14 {
        return Err(AdsError::ZeroMatrix);
    }
    let scaled = m.scale(1.0 / norm);
    let det = scaled.det();
    if det.abs() > 1e-10 {
        return Err(AdsError::NotNull { det: det.abs() });
    }
    // image: the larger column; kernel: rotate the larger row by 90 degrees
    let col1 = (scaled.a * scaled.a + scaled.c * scaled.c).sqrt();
    let col2 = (scaled.b * scaled.b + scaled.d * scaled.d).sqrt();
    let left = if col1 >= col2 {
        RP1::new(scaled.a, scaled.c)
    } else {
        RP1::new(scaled.b, scaled.d)
    };
    let row1 = (scaled.a * scaled.a + scaled.b * scaled.b).sqrt();
    let row2 = (scaled.c * scaled.c + scaled.d * scaled.d).sqrt();
    // a row (p, q) annihilates (-q, p)
    let right = if row1 >= row2 {
        RP1::new(-scaled.b, scaled.a)
    } else {
        RP1::new(-scaled.d, scaled.c)
    };
    Ok(BoundaryPoint { left, right })
}

/// Null projective representative of a boundary point; inverse direction of
/// [`boundary_to_rp1pair`] through the matrix coordinates.
pub fn rp1pair_to_boundary(p: &BoundaryPoint) -> Vec22 {
    p.null_rep()
}
