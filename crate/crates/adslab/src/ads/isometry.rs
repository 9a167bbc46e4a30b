//! Orientation-preserving isometries (A, B) acting by X -> A X B^{-1}.

use super::{AdsPoint, BoundaryPoint, Vec22};
use crate::error::AdsError;
use crate::mat2::Mat2;
use crate::Result;

/// A pair of unimodular matrices, each up to global sign.
#[derive(Debug, Clone, Copy)]
pub struct Isometry {
    pub a: Mat2,
    pub b: Mat2,
}

impl Isometry {
    /// Normalizes both factors to determinant one.
    pub fn new(a: Mat2, b: Mat2) -> Result<Self> {
        let a = a
            .normalized_det1()
            .ok_or_else(|| AdsError::InvalidInput("left factor has det <= 0".into()))?;
        let b = b
            .normalized_det1()
            .ok_or_else(|| AdsError::InvalidInput("right factor has det <= 0".into()))?;
        Ok(Isometry { a, b })
    }

    pub fn identity() -> Self {
        Isometry {
            a: Mat2::identity(),
            b: Mat2::identity(),
        }
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            a: self.a * other.a,
            b: self.b * other.b,
        }
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            a: self.a.inverse(),
            b: self.b.inverse(),
        }
    }

    pub fn act_vec(&self, v: &Vec22) -> Vec22 {
        let m = super::to_matrix(v);
        super::from_matrix(&(self.a * m * self.b.inverse()))
    }

    pub fn act_point(&self, p: &AdsPoint) -> AdsPoint {
        AdsPoint {
            rep: self.act_vec(&p.rep),
            canonical: false,
        }
    }

    pub fn act_boundary(&self, p: &BoundaryPoint) -> BoundaryPoint {
        BoundaryPoint {
            left: p.left.apply(&self.a),
            right: p.right.apply(&self.b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ads::{pair22, q22};
    use rand::{Rng, SeedableRng};

    fn random_unimodular(rng: &mut impl Rng) -> Mat2 {
        loop {
            let m = Mat2::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            if m.det() > 0.1 {
                return m.normalized_det1().unwrap();
            }
        }
    }

    pub(crate) fn random_isometry(rng: &mut impl Rng) -> Isometry {
        Isometry {
            a: random_unimodular(rng),
            b: random_unimodular(rng),
        }
    }

    #[test]
    fn identity_acts_trivially() {
        let id = Isometry::identity();
        let p = AdsPoint::new(Vec22::new(0.2, 0.1, 1.0, 0.05f64.sqrt())).unwrap();
        assert!(id.act_point(&p).approx_eq(&p, 1e-14));
        let b = BoundaryPoint::from_angles(0.3, 1.8);
        assert!(id.act_boundary(&b).chordal_dist(&b) < 1e-14);
    }

    #[test]
    fn pairing_is_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10_000 {
            let g = random_isometry(&mut rng);
            let x = Vec22::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            let y = Vec22::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            let lhs = pair22(&g.act_vec(&x), &g.act_vec(&y));
            assert!((lhs - pair22(&x, &y)).abs() <= 1e-10 * (1.0 + x.norm() * y.norm()));
        }
    }

    #[test]
    fn q_class_preserved_on_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let g = random_isometry(&mut rng);
            let p = AdsPoint::new(Vec22::new(0.4, -0.3, 1.1, 0.2)).unwrap();
            let q = q22(&g.act_point(&p).rep);
            assert!((q + 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn conjugation_preserves_diagonal() {
        // A = B acts on the diagonal boundary as conjugation
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let a = random_unimodular(&mut rng);
            let g = Isometry { a, b: a };
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let p = BoundaryPoint::from_angles(theta, theta);
            let gp = g.act_boundary(&p);
            assert!(gp.left.chordal_dist(&gp.right) <= 1e-10);
        }
    }
}
