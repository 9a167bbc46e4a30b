//! The real projective line RP^1, carrier of boundary coordinates.
//!
//! A point is a nonzero homogeneous pair [v1 : v2]. Three coordinate systems
//! are in play:
//!
//! * the real coordinate x = v1/v2 in R union {inf}, on which Mobius maps act
//!   by fractional-linear transformations;
//! * the line angle in [0, pi);
//! * the circle angle theta in [0, 2pi) of the unit-disc boundary, related to
//!   the real coordinate by x = -cot(theta/2). Theta = 0 corresponds to inf,
//!   and increasing theta sweeps the real line monotonically.

use crate::mat2::Mat2;

#[derive(Debug, Clone, Copy)]
pub struct RP1 {
    pub v1: f64,
    pub v2: f64,
}

impl RP1 {
    pub fn new(v1: f64, v2: f64) -> Self {
        let n = (v1 * v1 + v2 * v2).sqrt();
        RP1 {
            v1: v1 / n,
            v2: v2 / n,
        }
    }

    pub fn from_real(x: f64) -> Self {
        if x.is_infinite() {
            RP1 { v1: 1.0, v2: 0.0 }
        } else {
            RP1::new(x, 1.0)
        }
    }

    pub fn infinity() -> Self {
        RP1 { v1: 1.0, v2: 0.0 }
    }

    /// Real coordinate; +inf stands for the point at infinity.
    pub fn to_real(&self) -> f64 {
        if self.v2.abs() < 1e-300 {
            f64::INFINITY
        } else {
            self.v1 / self.v2
        }
    }

    /// Circle angle with x = -cot(theta/2); smooth through infinity.
    pub fn from_circle_angle(theta: f64) -> Self {
        let t = theta / 2.0;
        RP1::new(-t.cos(), t.sin())
    }

    /// Inverse of [`RP1::from_circle_angle`], valued in [0, 2pi).
    pub fn to_circle_angle(&self) -> f64 {
        // [v1 : v2] = [-cos(t) : sin(t)] with t = theta/2 in [0, pi).
        let mut t = f64::atan2(self.v2, -self.v1);
        if t < 0.0 {
            t += std::f64::consts::PI;
        }
        let theta = 2.0 * t;
        if theta >= std::f64::consts::TAU {
            theta - std::f64::consts::TAU
        } else {
            theta
        }
    }

    /// Line angle in [0, pi).
    pub fn line_angle(&self) -> f64 {
        let a = f64::atan2(self.v2, self.v1);
        a.rem_euclid(std::f64::consts::PI)
    }

    /// Chordal (sine of angle) distance between projective lines.
    pub fn chordal_dist(&self, other: &RP1) -> f64 {
        (self.v1 * other.v2 - self.v2 * other.v1).abs()
    }

    /// Linear (Mobius) action of a 2x2 matrix.
    pub fn apply(&self, m: &Mat2) -> RP1 {
        RP1::new(
            m.a * self.v1 + m.b * self.v2,
            m.c * self.v1 + m.d * self.v2,
        )
    }

    /// Projective determinant det[p q]; vanishes iff p = q in RP^1.
    pub fn pdet(&self, other: &RP1) -> f64 {
        self.v1 * other.v2 - self.v2 * other.v1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::circle_dist;

    #[test]
    fn circle_angle_round_trip() {
        for k in 0..64 {
            let theta = k as f64 * std::f64::consts::TAU / 64.0;
            let p = RP1::from_circle_angle(theta);
            assert!(circle_dist(p.to_circle_angle(), theta) < 1e-12);
        }
    }

    #[test]
    fn real_coordinate_matches_cot_rule() {
        let theta = 1.3;
        let p = RP1::from_circle_angle(theta);
        let expected = -1.0 / (theta / 2.0).tan();
        assert!((p.to_real() - expected).abs() < 1e-12);
        // theta = 0 is the point at infinity
        assert!(RP1::from_circle_angle(0.0).to_real().is_infinite());
        // theta = pi is 0
        assert!(RP1::from_circle_angle(std::f64::consts::PI).to_real().abs() < 1e-12);
    }

    #[test]
    fn circle_angle_is_orientation_preserving_on_reals() {
        // increasing theta on (0, 2pi) gives increasing real coordinate
        let mut prev = f64::NEG_INFINITY;
        for k in 1..63 {
            let theta = k as f64 * std::f64::consts::TAU / 64.0;
            let x = RP1::from_circle_angle(theta).to_real();
            assert!(x > prev);
            prev = x;
        }
    }
}
