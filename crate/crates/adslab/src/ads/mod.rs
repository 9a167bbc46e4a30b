//! The ambient space R^{2,2}, the quadric model of AdS^{2,1}, and its
//! matrix model.
//!
//! `q(x) = x1^2 + x2^2 - x3^2 - x4^2`; the quadric `q = -1` is the
//! double cover of AdS^{2,1}. The coordinate isometry onto the space of
//! 2x2 matrices with minus the determinant is
//!
//! ```text
//! M(x) = [ x3+x1  x2-x4 ]
//!        [ x2+x4  x3-x1 ]
//! ```
//!
//! which satisfies `-det(M(x)) = q(x)` exactly and carries `q = -1` onto
//! the unimodular group. The basepoint (0,0,1,0) is the identity matrix.

mod causal;
mod geodesic;
mod isometry;
mod plane;
mod point;

pub use causal::{causal_type, CausalClass, TangentVector};
pub use geodesic::{geodesic, timelike_distance};
pub use isometry::Isometry;
pub use plane::plane_type;
pub use point::{boundary_to_rp1pair, rp1pair_to_boundary, AdsPoint, BoundaryPoint};

use crate::mat2::Mat2;

/// A vector of R^{2,2}.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Vec22 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl Vec22 {
    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Vec22 { x1, x2, x3, x4 }
    }

    pub fn zero() -> Self {
        Vec22::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn e3() -> Self {
        Vec22::new(0.0, 0.0, 1.0, 0.0)
    }

    pub fn e4() -> Self {
        Vec22::new(0.0, 0.0, 0.0, 1.0)
    }

    pub fn scale(&self, s: f64) -> Vec22 {
        Vec22::new(self.x1 * s, self.x2 * s, self.x3 * s, self.x4 * s)
    }

    pub fn add(&self, o: &Vec22) -> Vec22 {
        Vec22::new(
            self.x1 + o.x1,
            self.x2 + o.x2,
            self.x3 + o.x3,
            self.x4 + o.x4,
        )
    }

    pub fn sub(&self, o: &Vec22) -> Vec22 {
        self.add(&o.scale(-1.0))
    }

    /// Euclidean norm (used only for scaling decisions, never for geometry).
    pub fn norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3 + self.x4 * self.x4).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite() && self.x4.is_finite()
    }

    /// The global timelike direction field (rotation in the (x3, x4)-plane);
    /// vectors pairing negatively with it are future-pointing.
    pub fn time_field(&self) -> Vec22 {
        Vec22::new(0.0, 0.0, self.x4, -self.x3)
    }
}

/// The quadratic form q_{2,2}.
pub fn q22(x: &Vec22) -> f64 {
    x.x1 * x.x1 + x.x2 * x.x2 - x.x3 * x.x3 - x.x4 * x.x4
}

/// Bilinear companion of q_{2,2} by polarization.
pub fn pair22(x: &Vec22, y: &Vec22) -> f64 {
    x.x1 * y.x1 + x.x2 * y.x2 - x.x3 * y.x3 - x.x4 * y.x4
}

/// Coordinate isometry onto (M_2(R), -det).
pub fn to_matrix(x: &Vec22) -> Mat2 {
    Mat2::new(x.x3 + x.x1, x.x2 - x.x4, x.x2 + x.x4, x.x3 - x.x1)
}

/// Inverse of [`to_matrix`].
pub fn from_matrix(m: &Mat2) -> Vec22 {
    Vec22::new(
        0.5 * (m.a - m.d),
        0.5 * (m.b + m.c),
        0.5 * (m.a + m.d),
        0.5 * (m.c - m.b),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn q22_direct_values() {
        assert_eq!(q22(&Vec22::new(1.0, 0.0, 0.0, 0.0)), 1.0);
        assert_eq!(q22(&Vec22::new(0.0, 0.0, 1.0, 0.0)), -1.0);
        assert_eq!(q22(&Vec22::new(1.0, 1.0, 1.0, 1.0)), 0.0);
    }

    #[test]
    fn matrix_model_det_identity() {
        // -det(M(x)) = q(x) on random vectors
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = Vec22::new(
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
            );
            let m = to_matrix(&x);
            assert!((-m.det() - q22(&x)).abs() <= 1e-12 * (1.0 + x.norm() * x.norm()));
        }
    }

    #[test]
    fn matrix_model_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let x = Vec22::new(
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
            );
            let back = from_matrix(&to_matrix(&x));
            assert!(back.sub(&x).norm() <= 1e-14 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn basepoint_is_identity_matrix() {
        // q = -1 representative mapping to the identity
        let m = to_matrix(&Vec22::e3());
        assert_eq!(m, Mat2::identity());
        assert!((m.det() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quadric_maps_to_unimodular() {
        // any q = -1 vector gives a det = 1 matrix
        let x = Vec22::new(0.3, -0.2, (1.0f64 + 0.3 * 0.3 + 0.2 * 0.2).sqrt(), 0.0);
        assert!((q22(&x) + 1.0).abs() < 1e-15);
        assert!((to_matrix(&x).det() - 1.0).abs() < 1e-14);
    }
}
