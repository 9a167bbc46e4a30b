//! Quasi-symmetry constants and three-point normalization.

use super::{CircleMap, MobiusMap};
use crate::error::AdsError;
use crate::rp1::RP1;
use crate::Result;

/// Search grid for the quasi-symmetry sup: tangent-warped centers (always
/// containing x = 0) and dyadic scales.
#[derive(Debug, Clone, Copy)]
pub struct QsGrid {
    pub centers: usize,
    pub scales: usize,
    pub log2_scale_min: f64,
    pub log2_scale_max: f64,
}

impl Default for QsGrid {
    fn default() -> Self {
        QsGrid {
            centers: 257,
            scales: 64,
            log2_scale_min: -10.0,
            log2_scale_max: 10.0,
        }
    }
}

impl QsGrid {
    /// Refine the search grid, keeping the previous grid nested inside.
    pub fn refined(&self) -> QsGrid {
        QsGrid {
            centers: (self.centers - 1) * 2 + 1,
            scales: self.scales * 2,
            ..*self
        }
    }

    fn centers_iter(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.centers;
        (0..n).map(move |i| {
            // symmetric tangent warp; the midpoint is exactly 0
            let u = i as f64 / (n - 1) as f64 - 0.5;
            (0.999 * std::f64::consts::PI * u).tan()
        })
    }

    fn scales_iter(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.scales;
        let (lo, hi) = (self.log2_scale_min, self.log2_scale_max);
        (0..n).map(move |j| 2f64.powf(lo + (hi - lo) * j as f64 / (n - 1) as f64))
    }
}

/// Quasi-symmetry report: the distortion constant and its witness.
#[derive(Debug, Clone)]
pub struct QsReport {
    pub k: f64,
    pub witness_x: f64,
    pub witness_t: f64,
}

/// The quasi-symmetry constant: sup over (x, t) of
/// max(rho, 1/rho) with rho = (f(x+t) - f(x)) / (f(x) - f(x-t)).
///
/// The map must fix infinity; otherwise it is first normalized by a Mobius
/// post-composition (the convention recorded by [`normalize`]). An exact
/// Mobius form short-circuits to k = 1.
pub fn qs_constant(f: &CircleMap, grid: &QsGrid) -> Result<QsReport> {
    if f.exact.as_ref().and_then(|e| e.as_mobius()).is_some() {
        return Ok(QsReport {
            k: 1.0,
            witness_x: 0.0,
            witness_t: 1.0,
        });
    }
    let f_inf = f.eval_rp1(&RP1::infinity());
    let fixes_inf = f_inf.chordal_dist(&RP1::infinity()) < 1e-9;
    let normalized;
    let f = if fixes_inf {
        f
    } else {
        normalized = normalize(f)?;
        &normalized
    };
    let mut best = QsReport {
        k: 1.0,
        witness_x: 0.0,
        witness_t: 1.0,
    };
    for x in grid.centers_iter() {
        let fx = f.eval_real(x);
        if !fx.is_finite() {
            continue;
        }
        for t in grid.scales_iter() {
            let fp = f.eval_real(x + t);
            let fm = f.eval_real(x - t);
            if !fp.is_finite() || !fm.is_finite() {
                continue;
            }
            let num = fp - fx;
            let den = fx - fm;
            if num <= 0.0 || den <= 0.0 {
                return Err(AdsError::NotMonotone { theta: x });
            }
            let rho = num / den;
            let k = rho.max(1.0 / rho);
            if k > best.k {
                best = QsReport {
                    k,
                    witness_x: x,
                    witness_t: t,
                };
            }
        }
    }
    Ok(best)
}

/// Post-compose with the unique Mobius map sending (f(0), f(1), f(inf)) to
/// (0, 1, inf); idempotent, and the identity on Mobius maps.
pub fn normalize(f: &CircleMap) -> Result<CircleMap> {
    let f0 = f.eval_rp1(&RP1::from_real(0.0));
    let f1 = f.eval_rp1(&RP1::from_real(1.0));
    let finf = f.eval_rp1(&RP1::infinity());
    let g = MobiusMap::to_standard_triple(&f0, &f1, &finf)?;
    if g.max_abs_diff(&MobiusMap::identity()) < 1e-14 {
        return Ok(f.clone());
    }
    f.post_compose(&g)
}
