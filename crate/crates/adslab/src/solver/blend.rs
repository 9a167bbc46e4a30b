//! Cutoff blending of a curvature field with the constant -1/eps.

use super::{CurvatureField, FieldKind};
use crate::error::AdsError;
use crate::Result;
use std::sync::Arc;

/// The smooth cutoff: sigma(2-x) / (sigma(2-x) + sigma(x-1)) with
/// sigma(s) = exp(-1/s) for s > 0 and 0 otherwise; identically 1 on [0, 1]
/// and 0 outside [0, 2].
pub fn bump(x: f64) -> f64 {
    fn sigma(s: f64) -> f64 {
        if s > 0.0 {
            (-1.0 / s).exp()
        } else {
            0.0
        }
    }
    if x <= 1.0 {
        return 1.0;
    }
    if x >= 2.0 {
        return 0.0;
    }
    let a = sigma(2.0 - x);
    let b = sigma(x - 1.0);
    a / (a + b)
}

/// Blend parameters: keep the field inside the hyperbolic ball of radius
/// r_n, interpolate across the annulus [r_n, 2 r_n], hold -1/eps beyond.
#[derive(Debug, Clone, Copy)]
pub struct BlendSpec {
    pub r_n: f64,
    pub epsilon: f64,
}

impl BlendSpec {
    pub fn new(r_n: f64, epsilon: f64) -> Result<BlendSpec> {
        if r_n <= 0.0 {
            return Err(AdsError::InvalidInput("blend radius must be positive".into()));
        }
        if epsilon <= 0.0 || 1.0 / epsilon <= 1.0 + epsilon {
            return Err(AdsError::BadCurvatureRange {
                reason: format!("empty pinching interval for epsilon = {epsilon}"),
            });
        }
        Ok(BlendSpec { r_n, epsilon })
    }

    /// Pointwise blend value at hyperbolic radius d.
    pub fn blend(&self, base_value: f64, d: f64) -> f64 {
        let phi = bump(d / self.r_n);
        phi * base_value + (1.0 - phi) * (-1.0 / self.epsilon)
    }
}

/// The blended field: the input inside B(o, r_n), the interpolation on the
/// annulus, the constant -1/eps outside B(o, 2 r_n). The output stays inside
/// [-1/eps, -1-eps'] with eps' = min(eps, gap of the base field).
pub fn blend_curvature(base: &CurvatureField, spec: BlendSpec) -> Result<CurvatureField> {
    if (base.epsilon - spec.epsilon).abs() > 1e-12 {
        return Err(AdsError::InvalidInput(
            "blend epsilon must match the field's declared epsilon".into(),
        ));
    }
    Ok(CurvatureField {
        kind: FieldKind::Blend {
            base: Arc::new(base.clone()),
            spec,
        },
        epsilon: base.epsilon,
        bounds: base.bounds.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_plateau_and_support() {
        assert_eq!(bump(0.0), 1.0);
        assert_eq!(bump(1.0), 1.0);
        assert_eq!(bump(2.0), 0.0);
        assert_eq!(bump(3.0), 0.0);
        assert!(bump(1.5) > 0.0 && bump(1.5) < 1.0);
        // symmetric midpoint of the explicit formula
        assert!((bump(1.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn blend_regions() {
        let base = CurvatureField::radial_gauss(0.5, 0.75).unwrap();
        let spec = BlendSpec::new(2.0, 0.5).unwrap();
        let blended = blend_curvature(&base, spec).unwrap();
        // inner region: the field itself
        let d = 1.0;
        assert_eq!(blended.eval_radial(d), base.eval_radial(d));
        // outer region: exactly -1/eps
        assert_eq!(blended.eval_radial(6.0), -2.0);
        // midpoint: the explicit convex combination
        let d = 3.0;
        let phi = bump(1.5);
        let expected = phi * base.eval_radial(d) + (1.0 - phi) * (-2.0);
        assert_eq!(blended.eval_radial(d), expected);
    }

    #[test]
    fn blend_range_stays_pinched() {
        // quantitative range audit on 10^4 points
        let base = CurvatureField::radial_gauss(0.4, 0.8).unwrap();
        let spec = BlendSpec::new(3.0, 0.4).unwrap();
        let blended = blend_curvature(&base, spec).unwrap();
        let eps_prime = 0.4f64.min(0.8);
        for i in 0..10_000 {
            let d = 12.0 * i as f64 / 9999.0;
            let v = blended.eval_radial(d);
            assert!(v >= -1.0 / 0.4 - 1e-12, "below -1/eps at d = {d}: {v}");
            assert!(v <= -1.0 - eps_prime + 1e-12, "above -1-eps' at d = {d}: {v}");
        }
    }
}
