//! Cross-ratio of RP^1 quadruples and the cross-ratio norm of a circle map.

use super::CircleMap;
use crate::error::AdsError;
use crate::mat2::Mat2;
use crate::rp1::RP1;
use crate::Result;

/// cr(a, b, c, d) = (c-a)(d-b) / ((b-a)(d-c)), evaluated projectively so the
/// point at infinity needs no special casing. Returns +-infinity as an
/// infinity marker when the denominator vanishes but the points are distinct.
pub fn cross_ratio(a: &RP1, b: &RP1, c: &RP1, d: &RP1) -> Result<f64> {
    let sep = pairwise_min_separation(a, b, c, d);
    if sep < 1e-12 {
        return Err(AdsError::DegenerateQuadruple { sep });
    }
    let num = c.pdet(a) * d.pdet(b);
    let den = b.pdet(a) * d.pdet(c);
    if den == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(num / den)
}

fn pairwise_min_separation(a: &RP1, b: &RP1, c: &RP1, d: &RP1) -> f64 {
    let pts = [a, b, c, d];
    let mut sep = f64::INFINITY;
    for i in 0..4 {
        for j in (i + 1)..4 {
            sep = sep.min(pts[i].chordal_dist(pts[j]));
        }
    }
    sep
}

/// A quadruple is symmetric when its cross-ratio is -1.
pub fn is_symmetric_quadruple(a: &RP1, b: &RP1, c: &RP1, d: &RP1) -> Result<bool> {
    Ok((cross_ratio(a, b, c, d)? + 1.0).abs() <= 1e-10)
}

/// Cross-ratio norm report: the sup of max(|cr f|, 1/|cr f|) over sampled
/// symmetric quadruples, with the witness quadruple that attains it.
#[derive(Debug, Clone)]
pub struct CrossRatioNorm {
    pub norm: f64,
    pub witness: [f64; 4],
}

/// Sup of the distorted cross-ratio over a deterministic family of symmetric
/// quadruples: dyadic translates (x, x+t, x-t, inf), swept through 16
/// rotations of the circle so that bounded quadruples are covered too.
pub fn cross_ratio_norm(f: &CircleMap, samples: usize) -> Result<CrossRatioNorm> {
    let mut best = CrossRatioNorm {
        norm: 1.0,
        witness: [0.0, 1.0, -1.0, f64::INFINITY],
    };
    let n_x = samples.max(16);
    let rotations = 16usize;
    for rot in 0..rotations {
        let phi = rot as f64 * std::f64::consts::TAU / rotations as f64;
        let g = Mat2::rotation(phi);
        for i in 0..n_x {
            // tangent-warped centers covering the real line
            let u = (i as f64 + 0.5) / n_x as f64 - 0.5;
            let x = (std::f64::consts::PI * u).tan();
            for j in 0..32 {
                let t = 2f64.powf(-8.0 + 16.0 * j as f64 / 31.0);
                let quad = [
                    RP1::from_real(x).apply(&g),
                    RP1::from_real(x + t).apply(&g),
                    RP1::from_real(x - t).apply(&g),
                    RP1::infinity().apply(&g),
                ];
                if pairwise_min_separation(&quad[0], &quad[1], &quad[2], &quad[3]) < 1e-11 {
                    continue;
                }
                let imgs = [
                    f.eval_rp1(&quad[0]),
                    f.eval_rp1(&quad[1]),
                    f.eval_rp1(&quad[2]),
                    f.eval_rp1(&quad[3]),
                ];
                let cr = match cross_ratio(&imgs[0], &imgs[1], &imgs[2], &imgs[3]) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                if !cr.is_finite() || cr == 0.0 {
                    continue;
                }
                let m = cr.abs().max(1.0 / cr.abs());
                if m > best.norm {
                    best = CrossRatioNorm {
                        norm: m,
                        witness: [
                            quad[0].to_real(),
                            quad[1].to_real(),
                            quad[2].to_real(),
                            quad[3].to_real(),
                        ],
                    };
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::MobiusMap;
    use rand::{Rng, SeedableRng};

    fn r(x: f64) -> RP1 {
        RP1::from_real(x)
    }

    #[test]
    fn normal_form_value() {
        // cr(0, 1, -1, inf) = -1 defines the symmetric normal form
        let cr = cross_ratio(&r(0.0), &r(1.0), &r(-1.0), &RP1::infinity()).unwrap();
        assert_eq!(cr, -1.0);
        assert!(is_symmetric_quadruple(&r(0.0), &r(1.0), &r(-1.0), &RP1::infinity()).unwrap());
    }

    #[test]
    fn direct_evaluation() {
        let cr = cross_ratio(&r(0.0), &r(1.0), &r(2.0), &r(3.0)).unwrap();
        assert!((cr - 4.0).abs() < 1e-14);
        assert!(!is_symmetric_quadruple(&r(0.0), &r(1.0), &r(2.0), &r(3.0)).unwrap());
    }

    #[test]
    fn mobius_invariance_randomized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        let mut trials = 0;
        while trials < 10_000 {
            let m = Mat2::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            if m.det() < 0.1 {
                continue;
            }
            let g = MobiusMap::new(m).unwrap();
            let pts: Vec<RP1> = (0..4)
                .map(|_| RP1::from_circle_angle(rng.random_range(0.0..std::f64::consts::TAU)))
                .collect();
            let sep = super::pairwise_min_separation(&pts[0], &pts[1], &pts[2], &pts[3]);
            if sep < 1e-3 {
                continue;
            }
            let cr0 = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
            let img: Vec<RP1> = pts.iter().map(|p| g.apply_rp1(p)).collect();
            let cr1 = cross_ratio(&img[0], &img[1], &img[2], &img[3]).unwrap();
            if cr0.is_finite() && cr1.is_finite() {
                assert!(
                    (cr0 - cr1).abs() <= 1e-10 * (1.0 + cr0.abs()),
                    "cr {cr0} vs {cr1}"
                );
            }
            trials += 1;
        }
    }

    #[test]
    fn symmetric_quadruples_stay_symmetric() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let m = Mat2::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            if m.det() < 0.1 {
                continue;
            }
            let g = MobiusMap::new(m).unwrap();
            let quad = [r(0.0), r(1.0), r(-1.0), RP1::infinity()];
            let img: Vec<RP1> = quad.iter().map(|p| g.apply_rp1(p)).collect();
            assert!(is_symmetric_quadruple(&img[0], &img[1], &img[2], &img[3]).unwrap());
        }
    }

    #[test]
    fn degenerate_quadruple_rejected() {
        assert!(matches!(
            cross_ratio(&r(1.0), &r(1.0), &r(2.0), &r(3.0)),
            Err(AdsError::DegenerateQuadruple { .. })
        ));
    }

    #[test]
    fn norm_of_identity_and_mobius_is_one() {
        let id = CircleMap::identity(64);
        assert!((cross_ratio_norm(&id, 32).unwrap().norm - 1.0).abs() <= 1e-10);
        let g = MobiusMap::new(Mat2::new(1.7, 0.4, 0.3, 0.8)).unwrap();
        let f = CircleMap::from_mobius(&g, 64).unwrap();
        assert!((cross_ratio_norm(&f, 32).unwrap().norm - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn piecewise_norm_finite_and_resolution_stable() {
        let f = CircleMap::piecewise_scale(2.0, 256).unwrap();
        let m1 = cross_ratio_norm(&f, 64).unwrap().norm;
        let m2 = cross_ratio_norm(&f, 128).unwrap().norm;
        assert!(m1 > 1.0);
        assert!(m1.is_finite() && m2.is_finite());
        // two-resolution stability
        assert!((m1 - m2).abs() <= 1e-3 * m1.max(1.0), "m1 {m1} m2 {m2}");
    }
}
