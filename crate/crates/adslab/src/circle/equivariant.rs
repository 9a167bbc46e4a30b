//! The equivariant boundary map of a matched pair of Fuchsian groups,
//! built from attracting fixed points of matched words.

use super::{CircleMap, FuchsianGroup, MobiusMap};
use crate::error::AdsError;
use crate::mat2::Mat2;
use crate::num::circle_dist;
use crate::rp1::RP1;
use crate::Result;

/// Result of the fixed-point construction.
#[derive(Debug, Clone)]
pub struct EquivariantMap {
    pub map: CircleMap,
    /// Per-generator equivariance residual sup |f(g1 t) - g2 f(t)| on a
    /// 256-point probe grid.
    pub residuals: Vec<f64>,
    /// Number of matched fixed-point pairs that fed the interpolation.
    pub pairs_used: usize,
}

// attracting fixed point, scale-invariant in det > 0 matrices
fn attracting_fixed_point_scaled(m: &Mat2) -> Option<RP1> {
    let det = m.det();
    if det <= 0.0 {
        return None;
    }
    let tr = m.trace();
    let disc = tr * tr - 4.0 * det;
    if disc <= 1e-9 * det {
        return None;
    }
    let lam = if tr >= 0.0 {
        (tr + disc.sqrt()) / 2.0
    } else {
        (tr - disc.sqrt()) / 2.0
    };
    let r1 = (m.a - lam, m.b);
    let r2 = (m.c, m.d - lam);
    let v = if r1.0.abs() + r1.1.abs() >= r2.0.abs() + r2.1.abs() {
        RP1::new(-r1.1, r1.0)
    } else {
        RP1::new(-r2.1, r2.0)
    };
    Some(v)
}

/// Enumerate reduced words up to `word_length` (with an element cap), map
/// the attracting fixed point of rho1(w) to that of rho2(w), sort circularly,
/// and return the monotone interpolation with per-generator residuals.
///
/// Errors with `NotDiscreteLike` when the collected fixed points violate
/// circular monotonicity, which signals a non-matching or non-Fuchsian pair.
pub fn equivariant_qs_map(
    rho1: &FuchsianGroup,
    rho2: &FuchsianGroup,
    word_length: usize,
    element_cap: usize,
) -> Result<EquivariantMap> {
    if rho1.generators.len() != rho2.generators.len() {
        return Err(AdsError::InvalidInput(
            "generator lists must have equal length".into(),
        ));
    }
    let cap = if element_cap == 0 { 1_200_000 } else { element_cap };
    let syms1 = rho1.symmetric_generators();
    let syms2 = rho2.symmetric_generators();
    let n_sym = syms1.len();

    // breadth-first over reduced words; matrices renormalized to unit
    // Frobenius norm to keep entries bounded (fixed points are scale-free)
    struct Node {
        last: usize,
        m1: Mat2,
        m2: Mat2,
    }
    let mut frontier: Vec<Node> = (0..n_sym)
        .map(|s| Node {
            last: s,
            m1: syms1[s].m,
            m2: syms2[s].m,
        })
        .collect();
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    let mut total = frontier.len();
    let harvest = |m1: &Mat2, m2: &Mat2, pairs: &mut Vec<(f64, f64)>| {
        if let (Some(a), Some(b)) = (
            attracting_fixed_point_scaled(m1),
            attracting_fixed_point_scaled(m2),
        ) {
            pairs.push((a.to_circle_angle(), b.to_circle_angle()));
        }
    };
    for node in &frontier {
        harvest(&node.m1, &node.m2, &mut pairs);
    }
    for _len in 2..=word_length.max(1) {
        let mut next = Vec::with_capacity(frontier.len() * (n_sym - 1));
        for node in &frontier {
            // the inverse of symbol s is s^1 (pairs are adjacent: 2k, 2k+1)
            let forbidden = node.last ^ 1;
            for s in 0..n_sym {
                if s == forbidden {
                    continue;
                }
                if total >= cap {
                    break;
                }
                let m1 = node.m1 * syms1[s].m;
                let m2 = node.m2 * syms2[s].m;
                let m1 = m1.scale(1.0 / m1.norm());
                let m2 = m2.scale(1.0 / m2.norm());
                harvest(&m1, &m2, &mut pairs);
                next.push(Node { last: s, m1, m2 });
                total += 1;
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let pairs_used = pairs.len();
    let map = CircleMap::from_boundary_pairs(pairs)?;

    // evaluate the equivariance defect on the sample set itself: these
    // points lie in the limit set, where the map is determined; probing the
    // complementary gaps would measure the interpolation bridge instead
    let mut residuals = Vec::with_capacity(rho1.generators.len());
    for (g1, g2) in rho1.generators.iter().zip(rho2.generators.iter()) {
        let mut worst: f64 = 0.0;
        for (alpha, beta) in map.samples() {
            let lhs = map.eval_angle(g1.apply_angle(alpha));
            let rhs = g2.apply_angle(crate::num::wrap_angle(beta));
            worst = worst.max(circle_dist(lhs, rhs));
        }
        residuals.push(worst);
    }

    Ok(EquivariantMap {
        map,
        residuals,
        pairs_used,
    })
}

/// Sup distance between the constructed map and a Mobius map, measured on
/// the matched fixed-point samples themselves.
pub fn sample_defect_against(map: &CircleMap, g: &MobiusMap) -> f64 {
    let mut worst: f64 = 0.0;
    for (t, v) in map.samples() {
        let expected = g.apply_angle(t);
        worst = worst.max(circle_dist(crate::num::wrap_angle(v), expected));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_groups_give_identity() {
        let grp = FuchsianGroup::free_pair(4.0, 4.0).unwrap();
        let em = equivariant_qs_map(&grp, &grp, 8, 0).unwrap();
        let id = CircleMap::identity(64);
        let d = em.map.sup_distance(&id, 512);
        assert!(d <= 1e-8, "distance to identity {d:.3e}");
        for r in &em.residuals {
            assert!(*r <= 1e-8);
        }
    }

    #[test]
    fn conjugate_pair_recovers_conjugator_on_samples() {
        let grp = FuchsianGroup::free_pair(2.2, 2.4).unwrap();
        let g = MobiusMap::new(Mat2::new(1.0, 0.4, 0.15, 1.0)).unwrap();
        let conj = grp.conjugate(&g);
        let em = equivariant_qs_map(&grp, &conj, 10, 0).unwrap();
        let defect = sample_defect_against(&em.map, &g);
        assert!(defect <= 1e-6, "sample defect {defect:.3e}");
    }

    #[test]
    fn residual_decreases_with_word_length() {
        let grp = FuchsianGroup::free_pair(2.2, 2.4).unwrap();
        let g = MobiusMap::new(Mat2::new(1.0, 0.3, 0.1, 1.0)).unwrap();
        let conj = grp.conjugate(&g);
        let mut prev = f64::INFINITY;
        for wl in [6, 8, 10, 12] {
            let em = equivariant_qs_map(&grp, &conj, wl, 0).unwrap();
            let worst = em.residuals.iter().cloned().fold(0.0, f64::max);
            assert!(
                worst <= prev * (1.0 + 1e-9) + 1e-12,
                "residual grew at word length {wl}: {worst:.3e} > {prev:.3e}"
            );
            prev = worst;
        }
    }

    #[test]
    fn nonconjugate_pair_gives_nontrivial_map_with_small_residual() {
        let rho1 = FuchsianGroup::free_pair(2.2, 2.4).unwrap();
        let rho2 = FuchsianGroup::free_pair(2.31, 2.52).unwrap();
        let em = equivariant_qs_map(&rho1, &rho2, 12, 0).unwrap();
        let worst = em.residuals.iter().cloned().fold(0.0, f64::max);
        assert!(worst <= 1e-4, "residual {worst:.3e}");
        let d = em.map.sup_distance(&CircleMap::identity(64), 512);
        assert!(d > 1e-3, "map should be nontrivial, distance {d:.3e}");
    }

    #[test]
    fn mismatched_generator_counts_rejected() {
        let a = FuchsianGroup::free_pair(4.0, 4.0).unwrap();
        let b = FuchsianGroup::octagon_genus2().unwrap();
        assert!(equivariant_qs_map(&a, &b, 4, 0).is_err());
    }
}
