//! Hyperbolic-normalized derivative magnitudes of fields on the disc.
//!
//! For radial fields the probe points are generated in intrinsic polar
//! terms through the hyperbolic law of cosines, so the audit stays
//! well-conditioned arbitrarily far from the origin. At a base point the
//! probes span geodesic normal coordinates; central differences of the
//! field over that local patch give the metric-normalized derivative
//! components, which are contracted with binomial weights into a
//! Frobenius magnitude per order.

use super::CurvatureField;
use crate::error::AdsError;
use crate::Result;

/// Sup of hyperbolic-normalized derivative magnitudes per order (1-based:
/// sup[p-1] is the order-p bound).
#[derive(Debug, Clone)]
pub struct DerivativeBounds {
    pub sup: [f64; 3],
    pub d_max: f64,
}

// f(probe) for a radial field: probe at normal coordinates xi from a base
// point at hyperbolic radius d; the probe's radius follows from the law of
// cosines with the angle beta between the outward radial direction and xi
fn radial_probe(field: &CurvatureField, d: f64, xi: (f64, f64)) -> f64 {
    let l = (xi.0 * xi.0 + xi.1 * xi.1).sqrt();
    if l < 1e-300 {
        return field.eval_radial(d);
    }
    let cos_beta = xi.0 / l;
    let arg = d.cosh() * l.cosh() + d.sinh() * l.sinh() * cos_beta;
    field.eval_radial(arg.max(1.0).acosh())
}

/// Measure sup bounds of orders 1..=p_max (p_max <= 3) over radii up to
/// d_max. Only radial fields are supported; the audit walks 280 radii.
pub fn derivative_bounds_check(
    field: &CurvatureField,
    p_max: usize,
    d_max: f64,
) -> Result<DerivativeBounds> {
    if !field.is_radial() {
        return Err(AdsError::InvalidInput(
            "derivative bounds audit supports radial fields".into(),
        ));
    }
    if p_max == 0 || p_max > 3 {
        return Err(AdsError::InvalidInput("orders 1..=3 supported".into()));
    }
    let h = 5e-3;
    let mut sup = [0.0f64; 3];
    let radii = 280usize;
    for i in 0..radii {
        let d = d_max * i as f64 / (radii - 1) as f64;
        // 5x5 local patch in normal coordinates
        let mut patch = [[0.0f64; 5]; 5];
        for (a, row) in patch.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                let xi = ((a as f64 - 2.0) * h, (b as f64 - 2.0) * h);
                *v = radial_probe(field, d, xi);
            }
        }
        let c = |a: i32, b: i32| patch[(a + 2) as usize][(b + 2) as usize];
        // central differences on the patch
        let fx = (c(1, 0) - c(-1, 0)) / (2.0 * h);
        let fy = (c(0, 1) - c(0, -1)) / (2.0 * h);
        let fxx = (c(1, 0) - 2.0 * c(0, 0) + c(-1, 0)) / (h * h);
        let fyy = (c(0, 1) - 2.0 * c(0, 0) + c(0, -1)) / (h * h);
        let fxy = (c(1, 1) - c(1, -1) - c(-1, 1) + c(-1, -1)) / (4.0 * h * h);
        let fxxx = (c(2, 0) - 2.0 * c(1, 0) + 2.0 * c(-1, 0) - c(-2, 0)) / (2.0 * h * h * h);
        let fyyy = (c(0, 2) - 2.0 * c(0, 1) + 2.0 * c(0, -1) - c(0, -2)) / (2.0 * h * h * h);
        let fxxy = ((c(1, 1) - 2.0 * c(0, 1) + c(-1, 1))
            - (c(1, -1) - 2.0 * c(0, -1) + c(-1, -1)))
            / (2.0 * h * h * h);
        let fxyy = ((c(1, 1) - 2.0 * c(1, 0) + c(1, -1))
            - (c(-1, 1) - 2.0 * c(-1, 0) + c(-1, -1)))
            / (2.0 * h * h * h);
        let m1 = (fx * fx + fy * fy).sqrt();
        let m2 = (fxx * fxx + 2.0 * fxy * fxy + fyy * fyy).sqrt();
        let m3 = (fxxx * fxxx + 3.0 * fxxy * fxxy + 3.0 * fxyy * fxyy + fyyy * fyyy).sqrt();
        sup[0] = sup[0].max(m1);
        if p_max >= 2 {
            sup[1] = sup[1].max(m2);
        }
        if p_max >= 3 {
            sup[2] = sup[2].max(m3);
        }
    }
    Ok(DerivativeBounds { sup, d_max })
}
