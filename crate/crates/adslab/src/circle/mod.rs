//! Circle homeomorphisms and their distortion invariants.

mod cross_ratio;
mod douady_earle;
mod equivariant;
mod fuchsian;
mod mobius;
mod quasi_isometry;
mod quasisym;

pub use cross_ratio::{cross_ratio, cross_ratio_norm, is_symmetric_quadruple, CrossRatioNorm};
pub use douady_earle::{barycentric_extension, DouadyEarleConfig};
pub use equivariant::{equivariant_qs_map, sample_defect_against, EquivariantMap};
pub use fuchsian::{FuchsianGroup, GroupTag};
pub use mobius::MobiusMap;
pub use quasi_isometry::{qi_constants, QiConfig};
pub use quasisym::{normalize, qs_constant, QsGrid, QsReport};

use crate::error::AdsError;
use crate::num::wrap_angle;
use crate::rp1::RP1;
use crate::Result;

const TAU: f64 = std::f64::consts::TAU;

/// Closed-form evaluation attached to a sampled map, used whenever a
/// quantity must not be polluted by interpolation error. Stored as a
/// sandwich post . core . pre so that Mobius pre- and post-composition and
/// inversion stay exact.
#[derive(Debug, Clone, Copy)]
pub struct ExactForm {
    pub pre: MobiusMap,
    pub core: CoreForm,
    pub post: MobiusMap,
}

#[derive(Debug, Clone, Copy)]
pub enum CoreForm {
    Identity,
    /// x -> x for x >= 0, x -> s x for x < 0, fixing infinity.
    PiecewiseScale(f64),
}

impl CoreForm {
    fn apply_real(&self, x: f64) -> f64 {
        match self {
            CoreForm::Identity => x,
            CoreForm::PiecewiseScale(s) => {
                if x.is_infinite() {
                    x
                } else if x < 0.0 {
                    s * x
                } else {
                    x
                }
            }
        }
    }

    fn inverse(&self) -> CoreForm {
        match self {
            CoreForm::Identity => CoreForm::Identity,
            CoreForm::PiecewiseScale(s) => CoreForm::PiecewiseScale(1.0 / s),
        }
    }
}

impl ExactForm {
    pub fn mobius(g: MobiusMap) -> Self {
        ExactForm {
            pre: MobiusMap::identity(),
            core: CoreForm::Identity,
            post: g,
        }
    }

    pub fn piecewise(s: f64) -> Self {
        ExactForm {
            pre: MobiusMap::identity(),
            core: CoreForm::PiecewiseScale(s),
            post: MobiusMap::identity(),
        }
    }

    /// Is the whole sandwich a Mobius map?
    pub fn as_mobius(&self) -> Option<MobiusMap> {
        match self.core {
            CoreForm::Identity => Some(self.post.compose(&self.pre)),
            CoreForm::PiecewiseScale(s) if (s - 1.0).abs() < 1e-15 => {
                Some(self.post.compose(&self.pre))
            }
            _ => None,
        }
    }

    pub fn apply_rp1(&self, p: &RP1) -> RP1 {
        let q = self.pre.apply_rp1(p);
        let r = match self.core {
            CoreForm::Identity => q,
            CoreForm::PiecewiseScale(_) => RP1::from_real(self.core.apply_real(q.to_real())),
        };
        self.post.apply_rp1(&r)
    }

    pub fn apply_real(&self, x: f64) -> f64 {
        self.apply_rp1(&RP1::from_real(x)).to_real()
    }

    pub fn post_compose(&self, g: &MobiusMap) -> ExactForm {
        ExactForm {
            pre: self.pre,
            core: self.core,
            post: g.compose(&self.post),
        }
    }

    pub fn pre_compose(&self, h: &MobiusMap) -> ExactForm {
        ExactForm {
            pre: self.pre.compose(h),
            core: self.core,
            post: self.post,
        }
    }

    pub fn inverse(&self) -> ExactForm {
        ExactForm {
            pre: self.post.inverse(),
            core: self.core.inverse(),
            post: self.pre.inverse(),
        }
    }
}

/// A strictly increasing degree-one circle homeomorphism, stored as a
/// monotone grid of lift samples (theta_i, F(theta_i)) with monotone cubic
/// interpolation between samples, plus an optional exact form.
#[derive(Debug, Clone)]
pub struct CircleMap {
    thetas: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    pub exact: Option<ExactForm>,
}

impl CircleMap {
    /// Validating constructor from lift samples.
    ///
    /// `thetas` must be strictly increasing within one period and `values`
    /// strictly increasing with total increase below 2pi (the degree-one
    /// condition F(theta + 2pi) = F(theta) + 2pi closes the remaining gap).
    pub fn from_samples(thetas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if thetas.len() != values.len() || thetas.len() < 16 {
            return Err(AdsError::InvalidInput(format!(
                "need at least 16 samples, got {}",
                thetas.len()
            )));
        }
        let span = thetas[thetas.len() - 1] - thetas[0];
        if span >= TAU {
            return Err(AdsError::InvalidInput(
                "sample angles must span less than one period".into(),
            ));
        }
        for i in 1..thetas.len() {
            if thetas[i] <= thetas[i - 1] {
                return Err(AdsError::NotMonotone {
                    theta: thetas[i],
                });
            }
            if values[i] <= values[i - 1] {
                return Err(AdsError::NotMonotone {
                    theta: thetas[i],
                });
            }
        }
        if values[values.len() - 1] - values[0] >= TAU {
            return Err(AdsError::NotMonotone {
                theta: thetas[thetas.len() - 1],
            });
        }
        let slopes = monotone_slopes(&thetas, &values);
        Ok(CircleMap {
            thetas,
            values,
            slopes,
            exact: None,
        })
    }

    pub fn with_exact(mut self, exact: ExactForm) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn sample_count(&self) -> usize {
        self.thetas.len()
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.thetas.iter().copied().zip(self.values.iter().copied())
    }

    /// The identity map on a uniform grid.
    pub fn identity(n: usize) -> Self {
        let thetas: Vec<f64> = (0..n).map(|i| i as f64 * TAU / n as f64).collect();
        let values = thetas.clone();
        let slopes = vec![1.0; n];
        CircleMap {
            thetas,
            values,
            slopes,
            exact: Some(ExactForm::mobius(MobiusMap::identity())),
        }
    }

    /// Sample a Mobius map on a uniform grid, keeping the exact form.
    pub fn from_mobius(g: &MobiusMap, n: usize) -> Result<Self> {
        let thetas: Vec<f64> = (0..n).map(|i| i as f64 * TAU / n as f64).collect();
        let raw: Vec<f64> = thetas.iter().map(|&t| g.apply_angle(t)).collect();
        let values = unwrap_monotone(&raw)?;
        let slopes = monotone_slopes(&thetas, &values);
        Ok(CircleMap {
            thetas,
            values,
            slopes,
            exact: Some(ExactForm::mobius(*g)),
        })
    }

    /// The one-parameter distortion family: x for x >= 0, s x for x < 0.
    /// The kink at x = 0 (theta = pi) and the fixed point at infinity
    /// (theta = 0) both land on sample nodes.
    pub fn piecewise_scale(s: f64, n: usize) -> Result<Self> {
        if s <= 0.0 {
            return Err(AdsError::InvalidInput("scale must be positive".into()));
        }
        let n = if n % 2 == 0 { n } else { n + 1 };
        let exact = ExactForm::piecewise(s);
        let thetas: Vec<f64> = (0..n).map(|i| i as f64 * TAU / n as f64).collect();
        let raw: Vec<f64> = thetas
            .iter()
            .map(|&t| exact.apply_rp1(&RP1::from_circle_angle(t)).to_circle_angle())
            .collect();
        let values = unwrap_monotone(&raw)?;
        let slopes = monotone_slopes(&thetas, &values);
        Ok(CircleMap {
            thetas,
            values,
            slopes,
            exact: Some(exact),
        })
    }

    /// Build from circularly ordered (alpha, beta) angle pairs, e.g. matched
    /// fixed points. Pairs are sorted by alpha; the betas must then be in the
    /// same circular order, otherwise the input is rejected.
    pub fn from_boundary_pairs(mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.len() < 16 {
            return Err(AdsError::InvalidInput(format!(
                "need at least 16 pairs, got {}",
                pairs.len()
            )));
        }
        for p in pairs.iter_mut() {
            p.0 = wrap_angle(p.0);
            p.1 = wrap_angle(p.1);
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        // drop near-coincident alphas (keep first occurrence)
        pairs.dedup_by(|b, a| (b.0 - a.0).abs() < 1e-11);
        if pairs.len() < 16 {
            return Err(AdsError::InvalidInput(
                "too few distinct sample angles".into(),
            ));
        }
        let mut thetas: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut values: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut wraps = 0.0;
        for p in pairs.iter() {
            let mut v = p.1 + wraps;
            if let Some(&prev) = values.last() {
                if v <= prev && prev - v > TAU / 2.0 {
                    wraps += TAU;
                    v += TAU;
                }
                if v <= prev {
                    // near-coincident samples carry no information; a real
                    // order violation signals a non-matching pair
                    if prev - v <= 1e-9 {
                        continue;
                    }
                    return Err(AdsError::NotDiscreteLike);
                }
            }
            thetas.push(p.0);
            values.push(v);
        }
        if thetas.len() < 16 {
            return Err(AdsError::InvalidInput(
                "too few distinct sample angles".into(),
            ));
        }
        if values[values.len() - 1] - values[0] >= TAU {
            return Err(AdsError::NotDiscreteLike);
        }
        let slopes = monotone_slopes(&thetas, &values);
        Ok(CircleMap {
            thetas,
            values,
            slopes,
            exact: None,
        })
    }

    /// Lift evaluation F(theta), satisfying F(theta + 2pi) = F(theta) + 2pi.
    pub fn eval_lift(&self, theta: f64) -> f64 {
        let t0 = self.thetas[0];
        let k = ((theta - t0) / TAU).floor();
        let tr = theta - k * TAU;
        self.eval_base(tr) + k * TAU
    }

    // evaluation on [theta_0, theta_0 + 2pi)
    fn eval_base(&self, tr: f64) -> f64 {
        let n = self.thetas.len();
        // wrap interval between the last node and the first node + 2pi
        if tr >= self.thetas[n - 1] {
            let x0 = self.thetas[n - 1];
            let x1 = self.thetas[0] + TAU;
            let y0 = self.values[n - 1];
            let y1 = self.values[0] + TAU;
            return hermite(tr, x0, x1, y0, y1, self.slopes[n - 1], self.slopes[0]);
        }
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.thetas[mid] <= tr {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hermite(
            tr,
            self.thetas[lo],
            self.thetas[lo + 1],
            self.values[lo],
            self.values[lo + 1],
            self.slopes[lo],
            self.slopes[lo + 1],
        )
    }

    /// Circle-angle evaluation in [0, 2pi); exact when an exact form exists.
    pub fn eval_angle(&self, theta: f64) -> f64 {
        match &self.exact {
            Some(e) => e.apply_rp1(&RP1::from_circle_angle(theta)).to_circle_angle(),
            None => wrap_angle(self.eval_lift(theta)),
        }
    }

    /// Evaluation in the real projective coordinate.
    pub fn eval_real(&self, x: f64) -> f64 {
        match &self.exact {
            Some(e) => e.apply_real(x),
            None => {
                let theta = RP1::from_real(x).to_circle_angle();
                RP1::from_circle_angle(self.eval_angle(theta)).to_real()
            }
        }
    }

    pub fn eval_rp1(&self, p: &RP1) -> RP1 {
        match &self.exact {
            Some(e) => e.apply_rp1(p),
            None => RP1::from_circle_angle(self.eval_angle(p.to_circle_angle())),
        }
    }

    /// The inverse homeomorphism (samples swapped; exact form inverted).
    pub fn inverse(&self) -> Result<CircleMap> {
        let pairs: Vec<(f64, f64)> = self
            .thetas
            .iter()
            .zip(self.values.iter())
            .map(|(&t, &v)| (wrap_angle(v), wrap_angle(t)))
            .collect();
        let mut inv = CircleMap::from_boundary_pairs(pairs)?;
        inv.exact = self.exact.as_ref().map(|e| e.inverse());
        Ok(inv)
    }

    /// Post-compose with a Mobius map, resampling on the same grid.
    pub fn post_compose(&self, g: &MobiusMap) -> Result<CircleMap> {
        let raw: Vec<f64> = self
            .thetas
            .iter()
            .map(|&t| g.apply_angle(self.eval_angle(t)))
            .collect();
        let values = unwrap_monotone(&raw)?;
        let slopes = monotone_slopes(&self.thetas, &values);
        let exact = self.exact.as_ref().map(|e| e.post_compose(g));
        Ok(CircleMap {
            thetas: self.thetas.clone(),
            values,
            slopes,
            exact,
        })
    }

    /// Pre-compose with a Mobius map, resampling on the same grid.
    pub fn pre_compose(&self, h: &MobiusMap) -> Result<CircleMap> {
        let raw: Vec<f64> = self
            .thetas
            .iter()
            .map(|&t| self.eval_angle(h.apply_angle(t)))
            .collect();
        let values = unwrap_monotone(&raw)?;
        let slopes = monotone_slopes(&self.thetas, &values);
        let exact = self.exact.as_ref().map(|e| e.pre_compose(h));
        Ok(CircleMap {
            thetas: self.thetas.clone(),
            values,
            slopes,
            exact,
        })
    }

    /// Sup distance between two maps over a uniform probe grid.
    pub fn sup_distance(&self, other: &CircleMap, probes: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..probes {
            let t = i as f64 * TAU / probes as f64;
            let d = crate::num::circle_dist(self.eval_angle(t), other.eval_angle(t));
            worst = worst.max(d);
        }
        worst
    }
}

fn hermite(x: f64, x0: f64, x1: f64, y0: f64, y1: f64, m0: f64, m1: f64) -> f64 {
    let h = x1 - x0;
    let s = (x - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
        + h * m0 * (s3 - 2.0 * s2 + s)
        + y1 * (-2.0 * s3 + 3.0 * s2)
        + h * m1 * (s3 - s2)
}

/// Harmonic-mean monotone slopes on a periodic strictly increasing lift.
fn monotone_slopes(thetas: &[f64], values: &[f64]) -> Vec<f64> {
    let n = thetas.len();
    let mut secants = Vec::with_capacity(n);
    for i in 0..n {
        let (dx, dy) = if i + 1 < n {
            (thetas[i + 1] - thetas[i], values[i + 1] - values[i])
        } else {
            (
                thetas[0] + TAU - thetas[n - 1],
                values[0] + TAU - values[n - 1],
            )
        };
        secants.push(dy / dx);
    }
    let mut slopes = Vec::with_capacity(n);
    for i in 0..n {
        let prev = if i == 0 { secants[n - 1] } else { secants[i - 1] };
        let next = secants[i];
        slopes.push(2.0 * prev * next / (prev + next));
    }
    slopes
}

/// Unwrap a sequence of circle angles sampled along one period into a
/// strictly increasing lift.
fn unwrap_monotone(raw: &[f64]) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(raw.len());
    let mut wraps = 0.0;
    for (i, &v) in raw.iter().enumerate() {
        let mut lifted = v + wraps;
        if i > 0 && lifted <= values[i - 1] {
            wraps += TAU;
            lifted += TAU;
        }
        if i > 0 && lifted <= values[i - 1] {
            return Err(AdsError::NotMonotone { theta: v });
        }
        values.push(lifted);
    }
    if values[values.len() - 1] - values[0] >= TAU {
        return Err(AdsError::NotMonotone {
            theta: raw[raw.len() - 1],
        });
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::Mat2;

    #[test]
    fn identity_lift() {
        let f = CircleMap::identity(64);
        for k in 0..10 {
            let t = k as f64 * 0.7 - 2.0;
            assert!((f.eval_lift(t) - t).abs() < 1e-12);
        }
    }

    #[test]
    fn degree_one_property() {
        let g = MobiusMap::new(Mat2::new(1.3, 0.2, 0.1, 0.9)).unwrap();
        let f = CircleMap::from_mobius(&g, 128).unwrap();
        for k in 0..8 {
            let t = k as f64 * 0.9;
            let a = f.eval_lift(t + TAU);
            let b = f.eval_lift(t) + TAU;
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn mobius_samples_are_exact() {
        let g = MobiusMap::new(Mat2::new(2.0, 1.0, 1.0, 1.0)).unwrap();
        let f = CircleMap::from_mobius(&g, 256).unwrap();
        for (t, v) in f.samples() {
            assert!(crate::num::circle_dist(g.apply_angle(t), wrap_angle(v)) < 1e-12);
        }
    }

    #[test]
    fn interpolation_error_small_for_smooth_map() {
        let g = MobiusMap::new(Mat2::new(1.5, 0.3, 0.2, 0.8)).unwrap();
        let mut f = CircleMap::from_mobius(&g, 512).unwrap();
        f.exact = None; // force the sampled path
        for k in 0..1000 {
            let t = k as f64 * TAU / 1000.0;
            let d = crate::num::circle_dist(f.eval_angle(t), g.apply_angle(t));
            assert!(d < 5e-7, "interp error {d:.3e} at theta = {t}");
        }
    }

    #[test]
    fn piecewise_scale_fixes_standard_triple() {
        let f = CircleMap::piecewise_scale(2.0, 256).unwrap();
        assert!(f.eval_real(0.0).abs() < 1e-14);
        assert!((f.eval_real(1.0) - 1.0).abs() < 1e-14);
        assert!(f.eval_real(f64::INFINITY).is_infinite());
        assert!((f.eval_real(-1.0) + 2.0).abs() < 1e-14);
    }

    #[test]
    fn non_monotone_rejected() {
        let thetas: Vec<f64> = (0..32).map(|i| i as f64 * TAU / 32.0).collect();
        let mut values = thetas.clone();
        values[5] = values[7];
        assert!(matches!(
            CircleMap::from_samples(thetas, values),
            Err(AdsError::NotMonotone { .. })
        ));
    }

    #[test]
    fn inverse_round_trip() {
        let f = CircleMap::piecewise_scale(3.0, 256).unwrap();
        let inv = f.inverse().unwrap();
        for k in 0..64 {
            let t = k as f64 * TAU / 64.0;
            let back = inv.eval_angle(f.eval_angle(t));
            assert!(crate::num::circle_dist(back, t) < 1e-10);
        }
    }
}
