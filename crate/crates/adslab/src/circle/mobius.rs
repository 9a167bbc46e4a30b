//! Mobius maps of RP^1 / the upper half-plane.

use crate::error::AdsError;
use crate::mat2::Mat2;
use crate::rp1::RP1;
use crate::Result;

/// A real Mobius map, stored as a det = 1 matrix (up to sign).
#[derive(Debug, Clone, Copy)]
pub struct MobiusMap {
    pub m: Mat2,
}

impl MobiusMap {
    pub fn new(m: Mat2) -> Result<Self> {
        let m = m
            .normalized_det1()
            .ok_or_else(|| AdsError::InvalidInput("Mobius matrix needs det > 0".into()))?;
        Ok(MobiusMap { m })
    }

    pub fn identity() -> Self {
        MobiusMap {
            m: Mat2::identity(),
        }
    }

    pub fn inverse(&self) -> Self {
        MobiusMap {
            m: self.m.adjugate(),
        }
    }

    pub fn compose(&self, other: &MobiusMap) -> Self {
        MobiusMap { m: self.m * other.m }
    }

    pub fn apply_rp1(&self, p: &RP1) -> RP1 {
        p.apply(&self.m)
    }

    /// Action on the real coordinate, with infinity handled projectively.
    pub fn apply_real(&self, x: f64) -> f64 {
        self.apply_rp1(&RP1::from_real(x)).to_real()
    }

    /// Action on upper half-plane points.
    pub fn apply_halfplane(&self, z: (f64, f64)) -> (f64, f64) {
        let (x, y) = z;
        // (a z + b) / (c z + d)
        let nr = self.m.a * x + self.m.b;
        let ni = self.m.a * y;
        let dr = self.m.c * x + self.m.d;
        let di = self.m.c * y;
        let den = dr * dr + di * di;
        ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den)
    }

    /// Action on circle angles, valued in [0, 2pi).
    pub fn apply_angle(&self, theta: f64) -> f64 {
        self.apply_rp1(&RP1::from_circle_angle(theta)).to_circle_angle()
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.m.trace().abs() > 2.0 + 1e-10
    }

    /// Attracting fixed point of a hyperbolic element.
    pub fn attracting_fixed_point(&self) -> Result<RP1> {
        let tr = self.m.trace();
        let disc = tr * tr - 4.0;
        if disc <= 0.0 {
            return Err(AdsError::InvalidInput(
                "attracting fixed point requires a hyperbolic element".into(),
            ));
        }
        // eigenvector for the eigenvalue of larger modulus
        let lam = if tr >= 0.0 {
            (tr + disc.sqrt()) / 2.0
        } else {
            (tr - disc.sqrt()) / 2.0
        };
        // (M - lam I) v = 0
        let r1 = (self.m.a - lam, self.m.b);
        let r2 = (self.m.c, self.m.d - lam);
        let v = if r1.0.abs() + r1.1.abs() >= r2.0.abs() + r2.1.abs() {
            RP1::new(-r1.1, r1.0)
        } else {
            RP1::new(-r2.1, r2.0)
        };
        Ok(v)
    }

    /// The unique Mobius map sending (a, b, c) to (0, 1, infinity).
    pub fn to_standard_triple(a: &RP1, b: &RP1, c: &RP1) -> Result<MobiusMap> {
        let sep = a
            .chordal_dist(b)
            .min(b.chordal_dist(c))
            .min(a.chordal_dist(c));
        if sep < 1e-12 {
            return Err(AdsError::DegenerateQuadruple { sep });
        }
        // z -> ((z - a)(b - c)) / ((z - c)(b - a)) in homogeneous form
        let m = Mat2::new(
            a.v2 * (b.v1 * c.v2 - b.v2 * c.v1),
            -a.v1 * (b.v1 * c.v2 - b.v2 * c.v1),
            c.v2 * (b.v1 * a.v2 - b.v2 * a.v1),
            -c.v1 * (b.v1 * a.v2 - b.v2 * a.v1),
        );
        let det = m.det();
        let m = if det < 0.0 {
            Mat2::new(-m.a, -m.b, m.c, m.d)
        } else {
            m
        };
        // det can be tiny; rescale by norm first for stability
        let m = m.scale(1.0 / m.norm());
        m.normalized_det1()
            .map(|m| MobiusMap { m })
            .ok_or(AdsError::DegenerateQuadruple { sep })
    }

    /// The unique Mobius map sending one triple to another.
    pub fn between_triples(from: [&RP1; 3], to: [&RP1; 3]) -> Result<MobiusMap> {
        let f = Self::to_standard_triple(from[0], from[1], from[2])?;
        let t = Self::to_standard_triple(to[0], to[1], to[2])?;
        Ok(t.inverse().compose(&f))
    }

    pub fn max_abs_diff(&self, other: &MobiusMap) -> f64 {
        // sign-insensitive comparison of det = 1 representatives
        let d1 = self.m.max_abs_diff(&other.m);
        let d2 = self.m.max_abs_diff(&other.m.scale(-1.0));
        d1.min(d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_triple_map() {
        let a = RP1::from_real(3.0);
        let b = RP1::from_real(5.0);
        let c = RP1::from_real(-1.0);
        let g = MobiusMap::to_standard_triple(&a, &b, &c).unwrap();
        assert!(g.apply_real(3.0).abs() < 1e-12);
        assert!((g.apply_real(5.0) - 1.0).abs() < 1e-12);
        assert!(g.apply_real(-1.0).is_infinite() || g.apply_real(-1.0).abs() > 1e12);
    }

    #[test]
    fn triple_with_infinity() {
        let a = RP1::from_real(0.0);
        let b = RP1::from_real(1.0);
        let c = RP1::infinity();
        let g = MobiusMap::to_standard_triple(&a, &b, &c).unwrap();
        assert!(g.max_abs_diff(&MobiusMap::identity()) < 1e-12);
    }

    #[test]
    fn attracting_fixed_point_of_translation() {
        // z -> 4z fixes 0 (repelling) and infinity (attracting)
        let g = MobiusMap::new(Mat2::new(2.0, 0.0, 0.0, 0.5)).unwrap();
        let p = g.attracting_fixed_point().unwrap();
        assert!(p.chordal_dist(&RP1::infinity()) < 1e-12);
        let p_inv = g.inverse().attracting_fixed_point().unwrap();
        assert!(p_inv.chordal_dist(&RP1::from_real(0.0)) < 1e-12);
    }

    #[test]
    fn degenerate_triple_rejected() {
        let a = RP1::from_real(1.0);
        assert!(MobiusMap::to_standard_triple(&a, &a, &RP1::infinity()).is_err());
    }
}
