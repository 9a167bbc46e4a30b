//! Geodesics of the quadric and timelike distance.

use super::causal::{causal_type_of, CausalClass, TangentVector};
use super::{pair22, AdsPoint};
use crate::error::AdsError;
use crate::Result;

/// Geodesic flow from p with velocity v at parameter t.
///
/// Velocities must be normalized: q(v) in {0} or within 1e-8 of +-1.
/// Timelike: cos(t) p + sin(t) v; spacelike: cosh(t) p + sinh(t) v;
/// lightlike: p + t v.
pub fn geodesic(p: &AdsPoint, v: &TangentVector, t: f64) -> Result<AdsPoint> {
    let q = super::q22(&v.v);
    let class = causal_type_of(&v.v);
    match class {
        CausalClass::Lightlike => {
            if q.abs() > 1e-8 {
                return Err(AdsError::UnnormalizedVelocity { q });
            }
            Ok(AdsPoint {
                rep: p.rep.add(&v.v.scale(t)),
                canonical: false,
            })
        }
        CausalClass::Timelike => {
            if (q + 1.0).abs() > 1e-8 {
                return Err(AdsError::UnnormalizedVelocity { q });
            }
            Ok(AdsPoint {
                rep: p.rep.scale(t.cos()).add(&v.v.scale(t.sin())),
                canonical: false,
            })
        }
        CausalClass::Spacelike => {
            if (q - 1.0).abs() > 1e-8 {
                return Err(AdsError::UnnormalizedVelocity { q });
            }
            Ok(AdsPoint {
                rep: p.rep.scale(t.cosh()).add(&v.v.scale(t.sinh())),
                canonical: false,
            })
        }
    }
}

/// Timelike distance between projective points, valued in [0, pi/2].
///
/// After sign canonicalization the pairing c = |<p, q>| satisfies c <= 1 for
/// timelike-related points and the distance is arccos(c); c > 1 means the
/// points are not timelike related. The arccos argument is clamped when
/// within 1e-12 of the boundary to avoid NaN at coincident points.
pub fn timelike_distance(p: &AdsPoint, q: &AdsPoint) -> Result<f64> {
    let c = pair22(&p.rep, &q.rep).abs();
    if c > 1.0 + 1e-12 {
        return Err(AdsError::NotTimelikeRelated { pairing: c });
    }
    Ok(c.clamp(0.0, 1.0).acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ads::{q22, Vec22};
    use rand::{Rng, SeedableRng};

    fn basepoint() -> AdsPoint {
        AdsPoint::new(Vec22::e3()).unwrap()
    }

    #[test]
    fn zero_time_returns_start() {
        let p = basepoint();
        let v = TangentVector::new(p, Vec22::e4()).unwrap();
        let out = geodesic(&p, &v, 0.0).unwrap();
        assert!(out.approx_eq(&p, 1e-14));
    }

    #[test]
    fn timelike_period_is_pi_projectively() {
        let p = basepoint();
        let v = TangentVector::new(p, Vec22::e4()).unwrap();
        let full = geodesic(&p, &v, std::f64::consts::TAU).unwrap();
        assert!(full.approx_eq(&p, 1e-12));
        let half = geodesic(&p, &v, std::f64::consts::PI).unwrap();
        // antipodal representative, same projective point
        assert!(half.approx_eq(&p, 1e-12));
        assert!((half.rep.x3 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn stays_on_quadric() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            // random point: boost of the basepoint
            let a = rng.random_range(-1.5..1.5);
            let b = rng.random_range(-1.5..1.5);
            let x3 = (1.0f64 + a * a + b * b).sqrt();
            let p = AdsPoint::new(Vec22::new(a, b, x3, 0.0)).unwrap();
            // timelike unit tangent: e4 is orthogonal to any x4 = 0 point
            let v = TangentVector::new(p, Vec22::e4()).unwrap();
            let t = rng.random_range(-10.0..10.0);
            let out = geodesic(&p, &v, t).unwrap();
            assert!((q22(&out.rep) + 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn unnormalized_velocity_rejected() {
        let p = basepoint();
        let v = TangentVector::new(p, Vec22::e4().scale(0.7)).unwrap();
        assert!(matches!(
            geodesic(&p, &v, 1.0),
            Err(AdsError::UnnormalizedVelocity { .. })
        ));
    }

    #[test]
    fn distance_along_timelike_geodesic() {
        // p = (0,0,1,0), q = (0,0,cos 0.7, sin 0.7) are 0.7 apart
        let p = basepoint();
        let q = AdsPoint::new(Vec22::new(0.0, 0.0, 0.7f64.cos(), 0.7f64.sin())).unwrap();
        let d = timelike_distance(&p, &q).unwrap();
        assert!((d - 0.7).abs() <= 1e-12);
        assert!(timelike_distance(&p, &p).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn distance_is_symmetric_and_additive() {
        let p = basepoint();
        let v = TangentVector::new(p, Vec22::e4()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let s: f64 = rng.random_range(0.0..0.7);
            let t: f64 = rng.random_range(0.0..0.7);
            let ps = geodesic(&p, &v, s).unwrap();
            let pt = geodesic(&p, &v, s + t.min(std::f64::consts::FRAC_PI_2 - s - 1e-9).max(0.0)).unwrap();
            let d1 = timelike_distance(&ps, &pt).unwrap();
            let d2 = timelike_distance(&pt, &ps).unwrap();
            assert!((d1 - d2).abs() <= 1e-12);
        }
        // additivity d(gamma(0), gamma(s+t)) = s + t below pi/2
        for (s, t) in [(0.2, 0.3), (0.1, 0.9), (0.5, 0.7)] {
            if s + t < std::f64::consts::FRAC_PI_2 {
                let end = geodesic(&p, &v, s + t).unwrap();
                let d = timelike_distance(&p, &end).unwrap();
                assert!((d - (s + t)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn spacelike_related_points_rejected() {
        let p = basepoint();
        let v = TangentVector::new(p, Vec22::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        let q = geodesic(&p, &v, 1.0).unwrap();
        assert!(matches!(
            timelike_distance(&p, &q),
            Err(AdsError::NotTimelikeRelated { .. })
        ));
    }

    #[test]
    fn causal_class_constant_along_geodesic() {
        let p = basepoint();
        let v = TangentVector::new(p, Vec22::e4()).unwrap();
        for k in 0..20 {
            let t = k as f64 * 0.3;
            let pt = geodesic(&p, &v, t).unwrap();
            // velocity of the flow at time t
            let vel = p.rep.scale(-t.sin()).add(&v.v.scale(t.cos()));
            let tv = TangentVector::new(pt, vel).unwrap();
            assert_eq!(super::super::causal_type(&tv), CausalClass::Timelike);
        }
    }
}
