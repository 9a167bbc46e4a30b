//! Fuchsian groups at desk scale: free two-generator Schottky-type groups
//! and the genus-2 surface group carried by the regular hyperbolic octagon.

use super::MobiusMap;
use crate::error::AdsError;
use crate::mat2::Mat2;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupTag {
    Free,
    /// Surface group of the given genus.
    SurfaceGenus(u32),
}

/// A purely hyperbolic Fuchsian group given by generators.
#[derive(Debug, Clone)]
pub struct FuchsianGroup {
    pub generators: Vec<MobiusMap>,
    pub tag: GroupTag,
}

impl FuchsianGroup {
    /// Validates that every generator is hyperbolic (|trace| > 2).
    pub fn new(generators: Vec<MobiusMap>, tag: GroupTag) -> Result<Self> {
        if generators.is_empty() {
            return Err(AdsError::InvalidInput("no generators".into()));
        }
        for g in &generators {
            if g.m.trace().abs() <= 2.0 + 1e-10 {
                return Err(AdsError::InvalidInput(format!(
                    "generator with |trace| = {:.6} is not hyperbolic",
                    g.m.trace().abs()
                )));
            }
        }
        Ok(FuchsianGroup { generators, tag })
    }

    /// Free group on two hyperbolic translations of lengths l1, l2 along
    /// perpendicular axes through the basepoint i. Discrete (ping-pong) for
    /// lengths comfortably above 2 arccosh(1 + sqrt 2) / ... in practice we
    /// require l >= 1.9 where the four bisector half-planes are disjoint.
    pub fn free_pair(l1: f64, l2: f64) -> Result<Self> {
        if l1 < 1.9 || l2 < 1.9 {
            return Err(AdsError::InvalidInput(
                "free pair needs translation lengths >= 1.9".into(),
            ));
        }
        let t1 = MobiusMap::new(Mat2::translation(l1))?;
        let r = Mat2::rotation(std::f64::consts::FRAC_PI_2);
        let t2 = MobiusMap::new(r * Mat2::translation(l2) * r.inverse())?;
        FuchsianGroup::new(vec![t1, t2], GroupTag::Free)
    }

    /// Genus-2 surface group from the regular hyperbolic octagon with vertex
    /// angle pi/4: four translations pairing opposite sides, with axes at
    /// angles k pi/4 and common translation length 2 arccosh(1 + sqrt 2).
    pub fn octagon_genus2() -> Result<Self> {
        let half = (1.0 + 2f64.sqrt()).acosh();
        let t = Mat2::translation(2.0 * half);
        let mut gens = Vec::with_capacity(4);
        for k in 0..4 {
            let r = Mat2::rotation(k as f64 * std::f64::consts::FRAC_PI_4);
            gens.push(MobiusMap::new(r * t * r.inverse())?);
        }
        FuchsianGroup::new(gens, GroupTag::SurfaceGenus(2))
    }

    /// Conjugated copy g G g^{-1}.
    pub fn conjugate(&self, g: &MobiusMap) -> FuchsianGroup {
        FuchsianGroup {
            generators: self
                .generators
                .iter()
                .map(|h| g.compose(h).compose(&g.inverse()))
                .collect(),
            tag: self.tag,
        }
    }

    /// Generators with their inverses, in a fixed order.
    pub fn symmetric_generators(&self) -> Vec<MobiusMap> {
        let mut out = Vec::with_capacity(2 * self.generators.len());
        for g in &self.generators {
            out.push(*g);
            out.push(g.inverse());
        }
        out
    }

    /// Hyperbolic distance in the upper half-plane.
    pub fn dist(z: (f64, f64), w: (f64, f64)) -> f64 {
        let dx = z.0 - w.0;
        let dy = z.1 - w.1;
        let arg = 1.0 + (dx * dx + dy * dy) / (2.0 * z.1 * w.1);
        arg.acosh()
    }

    /// Reduction walk: greedily move z toward the Dirichlet domain centered
    /// at the basepoint i, returning the reduced point and the group element
    /// gamma with gamma(reduced) = z.
    pub fn reduce(&self, z: (f64, f64), step_cap: usize) -> Result<((f64, f64), MobiusMap)> {
        let base = (0.0, 1.0);
        let mut current = z;
        let mut gamma = MobiusMap::identity();
        for _ in 0..step_cap {
            let d0 = Self::dist(base, current);
            let mut best: Option<(f64, MobiusMap, (f64, f64))> = None;
            for g in self.symmetric_generators() {
                let candidate = g.inverse().apply_halfplane(current);
                let d = Self::dist(base, candidate);
                if d < d0 - 1e-13 && best.as_ref().map_or(true, |(bd, _, _)| d < *bd) {
                    best = Some((d, g, candidate));
                }
            }
            match best {
                Some((_, g, candidate)) => {
                    current = candidate;
                    gamma = gamma.compose(&g);
                }
                None => return Ok((current, gamma)),
            }
        }
        Err(AdsError::ReductionFailure { cap: step_cap })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_hyperbolic() {
        for grp in [
            FuchsianGroup::free_pair(6.0, 6.0).unwrap(),
            FuchsianGroup::octagon_genus2().unwrap(),
        ] {
            for g in &grp.generators {
                assert!(g.is_hyperbolic());
            }
        }
        // octagon trace: 2 cosh(l/2) = 2 (1 + sqrt 2)
        let oct = FuchsianGroup::octagon_genus2().unwrap();
        let expected = 2.0 * (1.0 + 2f64.sqrt());
        assert!((oct.generators[0].m.trace().abs() - expected).abs() < 1e-12);
    }

    #[test]
    fn reduction_walk_returns_to_domain() {
        let grp = FuchsianGroup::free_pair(6.0, 6.0).unwrap();
        let g0 = grp.generators[0];
        let g1 = grp.generators[1];
        // a deliberately long word applied to an interior point
        let word = g0.compose(&g1).compose(&g0.inverse()).compose(&g1);
        let interior = (0.2, 1.3);
        let moved = word.apply_halfplane(interior);
        let (reduced, gamma) = grp.reduce(moved, 10_000).unwrap();
        // gamma(reduced) = moved
        let back = gamma.apply_halfplane(reduced);
        assert!(
            FuchsianGroup::dist(back, moved) < 1e-9,
            "walk inverse mismatch"
        );
        // reduced is no farther from the basepoint than the original image
        assert!(FuchsianGroup::dist((0.0, 1.0), reduced) <= FuchsianGroup::dist((0.0, 1.0), moved) + 1e-12);
        // and within one step of the interior point's own cell
        assert!(FuchsianGroup::dist((0.0, 1.0), reduced) <= FuchsianGroup::dist((0.0, 1.0), interior) + 1e-9);
    }

    #[test]
    fn short_translations_rejected() {
        assert!(FuchsianGroup::free_pair(1.0, 6.0).is_err());
    }
}
