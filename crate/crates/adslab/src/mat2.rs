//! Real 2x2 matrices: the workhorse of the matrix model and of Mobius maps.

use std::ops::{Add, Mul, Neg, Sub};

/// Row-major real 2x2 matrix [[a, b], [c, d]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

pub const IDENTITY: Mat2 = Mat2 {
    a: 1.0,
    b: 0.0,
    c: 0.0,
    d: 1.0,
};

/// The standard symplectic rotation [[0, -1], [1, 0]].
pub const ROT90: Mat2 = Mat2 {
    a: 0.0,
    b: -1.0,
    c: 1.0,
    d: 0.0,
};

impl Mat2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        IDENTITY
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// adj(M), so that M * adj(M) = det(M) * I.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    /// Inverse; caller guarantees det != 0.
    pub fn inverse(&self) -> Mat2 {
        self.adjugate().scale(1.0 / self.det())
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    /// Rescale to det = 1. Returns None when det <= 0.
    pub fn normalized_det1(&self) -> Option<Mat2> {
        let det = self.det();
        if det <= 0.0 {
            return None;
        }
        Some(self.scale(1.0 / det.sqrt()))
    }

    /// Rotation about i in the upper half-plane by boundary angle phi
    /// (the elliptic one-parameter subgroup).
    pub fn rotation(phi: f64) -> Mat2 {
        let (s, c) = (phi / 2.0).sin_cos();
        Mat2::new(c, s, -s, c)
    }

    /// Hyperbolic translation of length `l` along the imaginary axis.
    pub fn translation(l: f64) -> Mat2 {
        Mat2::new((l / 2.0).exp(), 0.0, 0.0, (-l / 2.0).exp())
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
            .max((self.d - other.d).abs())
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c, self.d + rhs.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c, self.d - rhs.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjugate_identity() {
        let m = Mat2::new(2.0, 1.0, 3.0, 4.0);
        let adj = m.adjugate();
        let prod = m * adj;
        assert!((prod.a - m.det()).abs() < 1e-14);
        assert!(prod.b.abs() < 1e-14);
        assert!((prod.d - m.det()).abs() < 1e-14);
    }

    #[test]
    fn rotation_is_unimodular() {
        for k in 0..8 {
            let r = Mat2::rotation(k as f64 * 0.7);
            assert!((r.det() - 1.0).abs() < 1e-14);
        }
    }
}
