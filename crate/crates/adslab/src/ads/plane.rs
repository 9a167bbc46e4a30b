//! Causal type of totally geodesic planes, via their normals.

use super::causal::{causal_type_of, CausalClass};
use super::{q22, Vec22};
use crate::error::AdsError;
use crate::Result;

/// Causal type of the plane W = n-perp intersected with the quadric.
///
/// A spacelike plane has a timelike normal, a timelike plane has a spacelike
/// normal, and a lightlike plane has a null normal. The normal must be
/// normalized so that q(n) lies in {-1, 0, 1}.
pub fn plane_type(normal: &Vec22) -> Result<CausalClass> {
    if normal.norm() < 1e-12 {
        return Err(AdsError::DegenerateSubspace);
    }
    let q = q22(normal);
    if q.abs() > 1e-8 && (q.abs() - 1.0).abs() > 1e-8 {
        return Err(AdsError::InvalidInput(format!(
            "normal not normalized: q(n) = {q:.6}"
        )));
    }
    Ok(match causal_type_of(normal) {
        CausalClass::Timelike => CausalClass::Spacelike,
        CausalClass::Spacelike => CausalClass::Timelike,
        CausalClass::Lightlike => CausalClass::Lightlike,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_planes() {
        // {x4 = 0}: timelike normal e4, spacelike plane
        assert_eq!(
            plane_type(&Vec22::e4()).unwrap(),
            CausalClass::Spacelike
        );
        // {x2 = 0}: spacelike normal e2, timelike plane
        assert_eq!(
            plane_type(&Vec22::new(0.0, 1.0, 0.0, 0.0)).unwrap(),
            CausalClass::Timelike
        );
        // null normal: lightlike plane
        assert_eq!(
            plane_type(&Vec22::new(1.0, 0.0, 1.0, 0.0)).unwrap(),
            CausalClass::Lightlike
        );
    }

    #[test]
    fn zero_normal_rejected() {
        assert!(matches!(
            plane_type(&Vec22::zero()),
            Err(AdsError::DegenerateSubspace)
        ));
    }
}
