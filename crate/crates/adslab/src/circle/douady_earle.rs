//! Conformal barycentric extension of a circle map to the disc.
//!
//! The extension value at z is the conformal barycenter of the pushforward
//! under f of the harmonic measure based at z: the unique w in the disc at
//! which the Mobius-shifted average of the boundary values vanishes. The
//! barycenter is found by trapezoid quadrature on the circle and a damped
//! fixed-point iteration.

use super::CircleMap;
use crate::error::AdsError;
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct DouadyEarleConfig {
    pub quadrature_nodes: usize,
    pub damping: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
}

impl Default for DouadyEarleConfig {
    fn default() -> Self {
        DouadyEarleConfig {
            quadrature_nodes: 512,
            damping: 0.5,
            residual_tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn from_angle(t: f64) -> Self {
        C64::new(t.cos(), t.sin())
    }
    fn conj(self) -> Self {
        C64::new(self.re, -self.im)
    }
    fn abs2(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
    fn abs(self) -> f64 {
        self.abs2().sqrt()
    }
    fn add(self, o: C64) -> Self {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: C64) -> Self {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: C64) -> Self {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    fn scale(self, s: f64) -> Self {
        C64::new(self.re * s, self.im * s)
    }
    fn div(self, o: C64) -> Self {
        let d = o.abs2();
        self.mul(o.conj()).scale(1.0 / d)
    }
}

// disc automorphism sending w to 0
fn mobius_shift(w: C64, xi: C64) -> C64 {
    xi.sub(w).div(C64::new(1.0, 0.0).sub(w.conj().mul(xi)))
}

// inverse shift: sends 0 back to w
fn mobius_unshift(w: C64, u: C64) -> C64 {
    u.add(w).div(C64::new(1.0, 0.0).add(w.conj().mul(u)))
}

/// Douady-Earle extension of `f` evaluated at the disc point `z`.
///
/// Requires |z| < 1 - 1e-10. Errors with `NoConvergence` when the damped
/// iteration exceeds the configured cap.
pub fn barycentric_extension(
    f: &CircleMap,
    z: (f64, f64),
    cfg: &DouadyEarleConfig,
) -> Result<(f64, f64)> {
    let z = C64::new(z.0, z.1);
    if z.abs() >= 1.0 - 1e-10 {
        return Err(AdsError::InvalidInput(
            "evaluation point must be interior to the disc".into(),
        ));
    }
    let n = cfg.quadrature_nodes;
    // boundary values and harmonic-measure weights at z
    let mut values = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut wsum = 0.0;
    for k in 0..n {
        let theta = k as f64 * std::f64::consts::TAU / n as f64;
        let xi = C64::from_angle(theta);
        let poisson = (1.0 - z.abs2()) / xi.sub(z).abs2();
        values.push(C64::from_angle(f.eval_angle(theta)));
        weights.push(poisson);
        wsum += poisson;
    }
    for w in weights.iter_mut() {
        *w /= wsum;
    }

    let field = |w: C64| -> C64 {
        let mut acc = C64::zero();
        for (v, &wt) in values.iter().zip(weights.iter()) {
            acc = acc.add(mobius_shift(w, *v).scale(wt));
        }
        acc
    };

    // start from the Euclidean average, pulled inside the disc
    let mut w = {
        let mut acc = C64::zero();
        for (v, &wt) in values.iter().zip(weights.iter()) {
            acc = acc.add(v.scale(wt));
        }
        if acc.abs() > 0.9 {
            acc.scale(0.9 / acc.abs())
        } else {
            acc
        }
    };
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_iter {
        let b = field(w);
        residual = b.abs();
        if residual <= cfg.residual_tol {
            return Ok((w.re, w.im));
        }
        w = mobius_unshift(w, b.scale(cfg.damping));
        if w.abs() >= 1.0 - 1e-14 {
            w = w.scale((1.0 - 1e-12) / w.abs());
        }
    }
    Err(AdsError::NoConvergence {
        what: "conformal barycenter iteration",
        iterations: cfg.max_iter,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::MobiusMap;
    use crate::mat2::Mat2;

    // disc automorphism corresponding to a half-plane Mobius map, computed by
    // conjugating with the Cayley transform z -> (z - i)/(z + i)
    fn disc_action(g: &MobiusMap, w: (f64, f64)) -> (f64, f64) {
        // w -> z in the upper half-plane
        let (wr, wi) = w;
        // z = i(1+w)/(1-w)
        let num = C64::new(-wi, 1.0 + wr);
        let den = C64::new(1.0 - wr, -wi);
        let z = num.div(den);
        let (zr, zi) = g.apply_halfplane((z.re, z.im));
        // back: w = (z - i)/(z + i)
        let z = C64::new(zr, zi);
        let w = z.sub(C64::new(0.0, 1.0)).div(z.add(C64::new(0.0, 1.0)));
        (w.re, w.im)
    }

    #[test]
    fn identity_extension_is_identity() {
        let f = CircleMap::identity(64);
        let cfg = DouadyEarleConfig::default();
        for z in [(0.0, 0.0), (0.3, 0.1), (-0.5, 0.4), (0.0, -0.7)] {
            let w = barycentric_extension(&f, z, &cfg).unwrap();
            assert!(
                ((w.0 - z.0).powi(2) + (w.1 - z.1).powi(2)).sqrt() < 1e-8,
                "DE(id)({z:?}) = {w:?}"
            );
        }
    }

    #[test]
    fn mobius_extension_at_zero() {
        // conformal naturality forces DE(g) = g
        let g = MobiusMap::new(Mat2::new(1.2, 0.4, 0.1, 1.0)).unwrap();
        let f = CircleMap::from_mobius(&g, 512).unwrap();
        let cfg = DouadyEarleConfig::default();
        let w = barycentric_extension(&f, (0.0, 0.0), &cfg).unwrap();
        let expected = disc_action(&g, (0.0, 0.0));
        let err = ((w.0 - expected.0).powi(2) + (w.1 - expected.1).powi(2)).sqrt();
        assert!(err < 1e-6, "DE(g)(0) = {w:?}, g(0) = {expected:?}");
    }

    #[test]
    fn iteration_cap_is_enforced() {
        let f = CircleMap::piecewise_scale(8.0, 512).unwrap();
        let cfg = DouadyEarleConfig {
            max_iter: 1,
            ..DouadyEarleConfig::default()
        };
        assert!(matches!(
            barycentric_extension(&f, (0.5, 0.3), &cfg),
            Err(crate::error::AdsError::NoConvergence { .. })
        ));
    }

    #[test]
    fn quadrature_refinement_stability() {
        let f = CircleMap::piecewise_scale(2.0, 1024).unwrap();
        let coarse = DouadyEarleConfig {
            quadrature_nodes: 512,
            ..DouadyEarleConfig::default()
        };
        let fine = DouadyEarleConfig {
            quadrature_nodes: 2048,
            ..DouadyEarleConfig::default()
        };
        let a = barycentric_extension(&f, (0.0, 0.0), &coarse).unwrap();
        let b = barycentric_extension(&f, (0.0, 0.0), &fine).unwrap();
        let d = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
        assert!(d <= 1e-6, "quadrature drift {d:.3e}");
    }

    #[test]
    fn conformal_naturality() {
        // sup over random (g, h, z) of |DE(g f h)(z) - g(DE(f)(h z))|
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let f = CircleMap::piecewise_scale(2.0, 512).unwrap();
        let cfg = DouadyEarleConfig {
            quadrature_nodes: 4096,
            ..DouadyEarleConfig::default()
        };
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let rand_mobius = |rng: &mut rand_chacha::ChaCha8Rng| loop {
                let m = Mat2::new(
                    rng.random_range(-1.5..1.5),
                    rng.random_range(-1.5..1.5),
                    rng.random_range(-1.5..1.5),
                    rng.random_range(-1.5..1.5),
                );
                if m.det() > 0.2 {
                    return MobiusMap::new(m).unwrap();
                }
            };
            let g = rand_mobius(&mut rng);
            let h = rand_mobius(&mut rng);
            let z = (rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            let gfh = f.post_compose(&g).unwrap().pre_compose(&h).unwrap();
            let lhs = barycentric_extension(&gfh, z, &cfg).unwrap();
            let hz = disc_action(&h, z);
            let de = barycentric_extension(&f, hz, &cfg).unwrap();
            let rhs = disc_action(&g, de);
            let d = ((lhs.0 - rhs.0).powi(2) + (lhs.1 - rhs.1).powi(2)).sqrt();
            worst = worst.max(d);
        }
        assert!(worst <= 1e-6, "naturality defect {worst:.3e}");
    }
}
