//! Globally hyperbolic convex subsets and their gluing maps.

use super::forms::{analytic_forms, fundamental_forms};
use super::projection::boundary_extension;
use super::{ChartKind, SpacelikeChart};
use crate::ads::BoundaryPoint;
use crate::circle::{normalize, qi_constants, qs_constant, CircleMap, QiConfig, QsGrid};
use crate::error::AdsError;
use crate::Result;
use rand::{Rng, SeedableRng};

/// A convex region bounded by a future and a past spacelike chart sharing
/// one ideal boundary curve, with curvature pinched in (-1/eps, -1-eps).
#[derive(Debug, Clone)]
pub struct GHConvexSubset {
    pub future: SpacelikeChart,
    pub past: SpacelikeChart,
    /// One ideal sample per grid ray.
    pub ideal: Vec<BoundaryPoint>,
    pub epsilon: f64,
}

impl GHConvexSubset {
    /// Validates convexity, the curvature range, and the matching of the
    /// two charts' ideal boundaries against `ideal`.
    pub fn new(
        future: SpacelikeChart,
        past: SpacelikeChart,
        ideal: Vec<BoundaryPoint>,
        epsilon: f64,
    ) -> Result<GHConvexSubset> {
        if epsilon <= 0.0 || epsilon >= 0.6 {
            return Err(AdsError::InvalidInput(
                "epsilon must lie in (0, 0.6)".into(),
            ));
        }
        if future.grid.n_theta != past.grid.n_theta || ideal.len() != future.grid.n_theta {
            return Err(AdsError::InvalidInput(
                "charts and ideal samples must share the ray grid".into(),
            ));
        }
        // ideal boundaries of both charts must match the declared curve
        let mut mismatch: f64 = 0.0;
        for (j, target) in ideal.iter().enumerate() {
            let phi = j as f64 * std::f64::consts::TAU / ideal.len() as f64;
            mismatch = mismatch.max(future.kind.ideal_point(phi).chordal_dist(target));
            mismatch = mismatch.max(past.kind.ideal_point(phi).chordal_dist(target));
        }
        if mismatch > 1e-2 {
            return Err(AdsError::BoundaryMismatch { mismatch });
        }
        // curvature range on both charts (sampled grid); the closed form
        // is used when the family admits one
        for chart in [&future, &past] {
            let field = match analytic_forms(chart) {
                Some(f) => f,
                None => fundamental_forms(chart)?,
            };
            for (idx, f) in field.forms.iter().enumerate() {
                if let Some(f) = f {
                    let prod = f.kappa.0 * f.kappa.1;
                    if prod <= 0.0 {
                        return Err(AdsError::NotConvex {
                            node: idx,
                            product: prod,
                        });
                    }
                    let k_i = -1.0 - prod;
                    if k_i <= -1.0 / epsilon || k_i >= -1.0 - epsilon {
                        return Err(AdsError::BadCurvatureRange {
                            reason: format!(
                                "induced curvature {k_i:.6} outside (-{:.3}, -{:.3})",
                                1.0 / epsilon,
                                1.0 + epsilon
                            ),
                        });
                    }
                }
            }
        }
        Ok(GHConvexSubset {
            future,
            past,
            ideal,
            epsilon,
        })
    }

    /// The standard fixture: the equidistant pair (S_t, S_{-t}) over the
    /// diagonal, optionally moved by an isometry.
    pub fn equidistant_pair(
        t: f64,
        grid: super::GridSpec,
        iso: Option<crate::ads::Isometry>,
        epsilon: f64,
    ) -> Result<GHConvexSubset> {
        let mk = |tt: f64| -> Result<SpacelikeChart> {
            let kind = match &iso {
                Some(g) => ChartKind::Equidistant { t: tt }.isometry_image(*g),
                None => ChartKind::Equidistant { t: tt },
            };
            SpacelikeChart::new(kind, grid)
        };
        let future = mk(t.abs())?;
        let past = mk(-t.abs())?;
        let n = grid.n_theta;
        let ideal: Vec<BoundaryPoint> = (0..n)
            .map(|j| {
                let phi = j as f64 * std::f64::consts::TAU / n as f64;
                future.kind.ideal_point(phi)
            })
            .collect();
        GHConvexSubset::new(future, past, ideal, epsilon)
    }
}

/// The gluing map of a convex subset, together with its normalization and
/// quasi-symmetry constant.
#[derive(Debug, Clone)]
pub struct GluingMap {
    /// Raw composed map (before normalization).
    pub raw: CircleMap,
    /// Three-point normalized representative.
    pub normalized: CircleMap,
    pub qs: f64,
    /// Sup distance of the normalized map from the identity.
    pub identity_deviation: f64,
    /// Worst radial Cauchy defect from the two boundary extensions.
    pub extension_defect: f64,
}

/// Compute the gluing map through the left-projection boundary extensions
/// of the two charts: the map matches the rays of the past chart to the
/// rays of the future chart through their common left boundary coordinate.
pub fn gluing_map(omega: &GHConvexSubset) -> Result<GluingMap> {
    let n = omega.future.grid.n_theta;
    let ext_f = boundary_extension(&omega.future.kind, n)?;
    let ext_p = boundary_extension(&omega.past.kind, n)?;
    // consistency with the declared ideal curve
    let mut mismatch: f64 = 0.0;
    for (j, target) in omega.ideal.iter().enumerate() {
        mismatch = mismatch.max(ext_f.left[j].chordal_dist(&target.left));
        mismatch = mismatch.max(ext_p.left[j].chordal_dist(&target.left));
    }
    if mismatch > 1e-2 {
        return Err(AdsError::BoundaryMismatch { mismatch });
    }
    let pairs_f: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let phi = j as f64 * std::f64::consts::TAU / n as f64;
            (phi, ext_f.left[j].to_circle_angle())
        })
        .collect();
    let pairs_p: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let phi = j as f64 * std::f64::consts::TAU / n as f64;
            (phi, ext_p.left[j].to_circle_angle())
        })
        .collect();
    let f1 = CircleMap::from_boundary_pairs(pairs_f)?; // ray -> left coordinate (future)
    let f2 = CircleMap::from_boundary_pairs(pairs_p)?; // ray -> left coordinate (past)
    let f2_inv = f2.inverse()?;
    let phi_pairs: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let phi = j as f64 * std::f64::consts::TAU / n as f64;
            (phi, f2_inv.eval_angle(f1.eval_angle(phi)))
        })
        .collect();
    let raw = CircleMap::from_boundary_pairs(phi_pairs)?;
    let normalized = normalize(&raw)?;
    let qs = qs_constant(&normalized, &QsGrid::default())?.k;
    let identity_deviation = normalized.sup_distance(&CircleMap::identity(64), 512);
    Ok(GluingMap {
        raw,
        normalized,
        qs,
        identity_deviation,
        extension_defect: ext_f.cauchy_defect.max(ext_p.cauchy_defect),
    })
}

/// Smallest D >= 1 with every principal curvature of both boundary charts
/// inside [1/D, D] (in absolute value); errors with NotConvex when a node
/// has kappa1 * kappa2 <= 0.
pub fn principal_curvature_bounds(omega: &GHConvexSubset) -> Result<f64> {
    let mut d: f64 = 1.0;
    for chart in [&omega.future, &omega.past] {
        let field = match analytic_forms(chart) {
            Some(f) => f,
            None => fundamental_forms(chart)?,
        };
        for (idx, f) in field.forms.iter().enumerate() {
            if let Some(f) = f {
                let prod = f.kappa.0 * f.kappa.1;
                if prod <= 0.0 {
                    return Err(AdsError::NotConvex {
                        node: idx,
                        product: prod,
                    });
                }
                let k1 = f.kappa.0.abs();
                let k2 = f.kappa.1.abs();
                d = d.max(k1).max(k2).max(1.0 / k1).max(1.0 / k2);
            }
        }
    }
    Ok(d)
}

/// Per-boundary quasi-isometry constants of the left projection composed
/// with the chart parametrization, from sampled distance pairs. The domain
/// metric is the induced metric of the chart; only the equidistant family
/// (and its isometric images) carries it in closed form.
pub fn projection_qi_report(omega: &GHConvexSubset) -> Result<[(f64, f64); 2]> {
    let mut out = [(1.0, 0.0); 2];
    for (slot, chart) in [&omega.future, &omega.past].into_iter().enumerate() {
        let t = equidistant_t(&chart.kind).ok_or_else(|| {
            AdsError::InvalidInput(
                "projection qi report requires an equidistant-family chart".into(),
            )
        })?;
        let field = fundamental_forms(chart)?;
        let mut pairs = Vec::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x91AB + slot as u64);
        let mut guard = 0;
        while pairs.len() < 400 && guard < 100_000 {
            guard += 1;
            let ir1 = rng.random_range(2..chart.grid.n_r - 2);
            let it1 = rng.random_range(0..chart.grid.n_theta);
            let ir2 = rng.random_range(2..chart.grid.n_r - 2);
            let it2 = rng.random_range(0..chart.grid.n_theta);
            if (ir1, it1) == (ir2, it2) {
                continue;
            }
            let w1 = chart.node_disc(ir1, it1);
            let w2 = chart.node_disc(ir2, it2);
            // induced distance on the equidistant surface
            let d_dom = t.cos() * super::disc_distance(w1, w2);
            if !(0.1..=20.0).contains(&d_dom) {
                continue;
            }
            let f1 = match field.at(ir1, it1) {
                Some(f) => f,
                None => continue,
            };
            let f2 = match field.at(ir2, it2) {
                Some(f) => f,
                None => continue,
            };
            let (l1, _) = super::projection::left_right_projection(chart.point(ir1, it1), &f1.normal)?;
            let (l2, _) = super::projection::left_right_projection(chart.point(ir2, it2), &f2.normal)?;
            let d_img = halfplane_distance(l1, l2);
            pairs.push((d_dom, d_img));
        }
        out[slot] = qi_constants(&pairs, &QiConfig::default())?;
    }
    Ok(out)
}

fn equidistant_t(kind: &ChartKind) -> Option<f64> {
    match kind {
        ChartKind::Equidistant { t } => Some(*t),
        ChartKind::IsometryImage { base, .. } => equidistant_t(base),
        ChartKind::Graph { .. } | ChartKind::GraphExpr { .. } => None,
    }
}

fn halfplane_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let d2 = (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
    (1.0 + d2 / (2.0 * a.1 * b.1)).acosh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::Mat2;
    use crate::surface::GridSpec;

    fn pi6() -> f64 {
        std::f64::consts::FRAC_PI_6
    }

    #[test]
    fn equidistant_pair_validates() {
        let omega = GHConvexSubset::equidistant_pair(pi6(), GridSpec::default(), None, 0.25);
        assert!(omega.is_ok());
    }

    #[test]
    fn gluing_map_of_fuchsian_pair_is_identity() {
        let omega =
            GHConvexSubset::equidistant_pair(pi6(), GridSpec::default(), None, 0.25).unwrap();
        let glue = gluing_map(&omega).unwrap();
        assert!(
            glue.identity_deviation <= 1e-4,
            "gluing map deviates from the identity by {:.3e}",
            glue.identity_deviation
        );
        assert!(glue.qs <= 1.0 + 1e-4);
    }

    #[test]
    fn gluing_map_is_isometry_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let mut done = 0;
        while done < 3 {
            let m1 = Mat2::new(
                rng.random_range(-1.2..1.2),
                rng.random_range(-1.2..1.2),
                rng.random_range(-1.2..1.2),
                rng.random_range(-1.2..1.2),
            );
            let m2 = Mat2::new(
                rng.random_range(-1.2..1.2),
                rng.random_range(-1.2..1.2),
                rng.random_range(-1.2..1.2),
                rng.random_range(-1.2..1.2),
            );
            if m1.det() < 0.3 || m2.det() < 0.3 {
                continue;
            }
            let g = crate::ads::Isometry::new(m1, m2).unwrap();
            let omega =
                GHConvexSubset::equidistant_pair(pi6(), GridSpec::default(), Some(g), 0.25)
                    .unwrap();
            let glue = gluing_map(&omega).unwrap();
            assert!(
                glue.identity_deviation <= 1e-4,
                "moved gluing map deviates by {:.3e}",
                glue.identity_deviation
            );
            done += 1;
        }
    }

    #[test]
    fn equidistant_duality_across_t() {
        for t in [
            std::f64::consts::PI / 12.0,
            pi6(),
            std::f64::consts::FRAC_PI_4,
        ] {
            // the curvature -sec^2 t must land inside (-1/eps, -1-eps)
            let eps = (0.5 * (1.0 / (t.cos() * t.cos()) - 1.0)).min(0.45);
            let omega =
                GHConvexSubset::equidistant_pair(t, GridSpec::default(), None, eps).unwrap();
            let glue = gluing_map(&omega).unwrap();
            assert!(
                glue.identity_deviation <= 1e-4,
                "t = {t}: deviation {:.3e}",
                glue.identity_deviation
            );
        }
    }

    #[test]
    fn curvature_bound_is_cot_t() {
        let omega =
            GHConvexSubset::equidistant_pair(pi6(), GridSpec::default(), None, 0.25).unwrap();
        let d = principal_curvature_bounds(&omega).unwrap();
        let expected = 3f64.sqrt();
        assert!((d - expected).abs() <= 1e-6, "D = {d}, expected sqrt(3)");
        // the umbilic pair at pi/4 has D = 1
        let omega = GHConvexSubset::equidistant_pair(
            std::f64::consts::FRAC_PI_4,
            GridSpec::default(),
            None,
            0.05,
        )
        .unwrap();
        let d = principal_curvature_bounds(&omega).unwrap();
        assert!((d - 1.0).abs() <= 1e-6, "D = {d}, expected 1");
    }

    #[test]
    fn mismatched_ideal_boundaries_rejected() {
        let grid = GridSpec::default();
        let future = SpacelikeChart::equidistant(pi6(), grid).unwrap();
        let past = SpacelikeChart::equidistant(-pi6(), grid).unwrap();
        // a deliberately wrong ideal curve (rotated diagonal)
        let n = grid.n_theta;
        let ideal: Vec<BoundaryPoint> = (0..n)
            .map(|j| {
                let phi = j as f64 * std::f64::consts::TAU / n as f64;
                BoundaryPoint::from_angles(phi + 0.5, phi)
            })
            .collect();
        assert!(matches!(
            GHConvexSubset::new(future, past, ideal, 0.25),
            Err(AdsError::BoundaryMismatch { .. })
        ));
    }

    #[test]
    fn qi_constants_of_fuchsian_projection() {
        // t = 0 would be degenerate as a pair; use a single-chart pair at
        // small t and check A ~ sec t with the operator-norm bound
        let t = pi6();
        let omega =
            GHConvexSubset::equidistant_pair(t, GridSpec::default(), None, 0.25).unwrap();
        let reports = projection_qi_report(&omega).unwrap();
        for (a, b) in reports {
            // feasible budgeted fit stays below the bilipschitz bound
            let bound = (1.0 + t.tan()).powi(2);
            assert!(a <= bound + 1e-9, "A = {a} exceeds {bound}");
            assert!(a >= 1.0 && b >= 0.0);
            // consistency: the pure multiplicative constant is sec t
            assert!(a <= 1.0 / t.cos() + 1e-6);
        }
    }
}
