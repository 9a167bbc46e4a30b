//! Group-invariant extension of a fundamental-domain field by the
//! reduction walk.

use super::{CurvatureField, FieldKind};
use crate::circle::FuchsianGroup;
use crate::Result;
use std::sync::Arc;

/// Extend a field given on the Dirichlet domain of the group to a
/// group-invariant field on the disc: the evaluator reduces the point into
/// the domain and evaluates there. Smoothness across the gluing locus holds
/// because blended inputs are constant (-1/eps) near the domain boundary.
pub fn reflect_invariant(
    base: &CurvatureField,
    group: &FuchsianGroup,
    step_cap: usize,
) -> Result<CurvatureField> {
    Ok(CurvatureField {
        kind: FieldKind::Invariant {
            base: Arc::new(base.clone()),
            group: Arc::new(group.clone()),
            step_cap: if step_cap == 0 { 10_000 } else { step_cap },
        },
        epsilon: base.epsilon,
        bounds: base.bounds.clone(),
    })
}

/// Max |K(gamma z) - K(z)| over the generators and a seeded point set.
pub fn invariance_residual(
    field: &CurvatureField,
    group: &FuchsianGroup,
    points: usize,
) -> Result<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1A7B);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let r: f64 = rng.random_range(0.0..0.93f64);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let w = (r * phi.cos(), r * phi.sin());
        let kw = field.eval_disc(w);
        if !kw.is_finite() {
            return Err(crate::error::AdsError::ReductionFailure { cap: 0 });
        }
        let z = crate::surface::disc_to_halfplane(w);
        for g in group.symmetric_generators() {
            let gz = g.apply_halfplane(z);
            let gw = crate::surface::halfplane_to_disc(gz);
            if gw.0 * gw.0 + gw.1 * gw.1 >= 0.9999 {
                continue;
            }
            let kgw = field.eval_disc(gw);
            if kgw.is_finite() {
                worst = worst.max((kgw - kw).abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{blend_curvature, BlendSpec};

    fn invariant_fixture() -> (CurvatureField, FuchsianGroup) {
        let group = FuchsianGroup::free_pair(6.0, 6.0).unwrap();
        let base = CurvatureField::radial_gauss(0.5, 0.75).unwrap();
        // constant outside hyperbolic radius 2.4 < the Dirichlet inradius 3
        let blended = blend_curvature(&base, BlendSpec::new(1.2, 0.5).unwrap()).unwrap();
        let field = reflect_invariant(&blended, &group, 0).unwrap();
        (field, group)
    }

    #[test]
    fn fundamental_domain_points_pass_through() {
        let (field, _) = invariant_fixture();
        // near the basepoint the reduction walk is a no-op
        for w in [(0.0, 0.0), (0.1, 0.05), (-0.2, 0.1)] {
            let direct = {
                let base = CurvatureField::radial_gauss(0.5, 0.75).unwrap();
                let blended =
                    blend_curvature(&base, BlendSpec::new(1.2, 0.5).unwrap()).unwrap();
                blended.eval_disc(w)
            };
            assert!((field.eval_disc(w) - direct).abs() <= 1e-12);
        }
    }

    #[test]
    fn generator_translates_reduce_back() {
        let (field, group) = invariant_fixture();
        let g = group.generators[0];
        // an interior point pushed out by a generator evaluates identically
        let w = (0.15, -0.1);
        let z = crate::surface::disc_to_halfplane(w);
        let gz = g.apply_halfplane(z);
        let gw = crate::surface::halfplane_to_disc(gz);
        let a = field.eval_disc(w);
        let b = field.eval_disc(gw);
        assert!((a - b).abs() <= 1e-10, "invariance broke: {a} vs {b}");
    }

    #[test]
    fn invariance_residual_is_tiny() {
        let (field, group) = invariant_fixture();
        let resid = invariance_residual(&field, &group, 1000).unwrap();
        assert!(resid <= 1e-10, "residual {resid:.3e}");
    }
}
