//! Discrete norm reporting for solved conformal factors: Sobolev-type
//! grid norms and Holder quotients on compact sub-discs, and the
//! convergence pattern of solutions under curvature convergence.

use super::liouville::ConformalFactor;
use crate::error::AdsError;
use crate::Result;

/// Discrete norms of a grid field on a compact sub-disc.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FieldNorms {
    /// W^{k,p} norms for k <= 2, p in {2, 4}: keyed [ (k, p) order:
    /// (0,2), (1,2), (2,2), (0,4), (1,4), (2,4) ].
    pub sobolev: [f64; 6],
    /// Holder quotient estimate sup |u(x)-u(y)| / |x-y|^alpha, alpha = 1/2.
    pub holder_half: f64,
    pub sub_radius: f64,
}

/// Discrete Sobolev and Holder quotients of a solution, restricted to the
/// Euclidean sub-disc of radius r.
pub fn field_norms(sol: &ConformalFactor, r: f64) -> Result<FieldNorms> {
    let g = &sol.grid;
    let h = g.h;
    let inside = |k: usize| -> bool {
        let (x, y) = g.nodes[k].xy;
        x * x + y * y <= r * r
    };
    // first and second differences where the full interior stencil exists
    let mut sums = [0.0f64; 6];
    let mut count = 0usize;
    let n = g.n;
    for j in 1..n - 1 {
        for i in 1..n - 1 {
            let (Some(k), Some(ke), Some(kw), Some(kn), Some(ks)) = (
                g.interior_index(i, j),
                g.interior_index(i + 1, j),
                g.interior_index(i - 1, j),
                g.interior_index(i, j + 1),
                g.interior_index(i, j - 1),
            ) else {
                continue;
            };
            if !inside(k) {
                continue;
            }
            let u = sol.u[k];
            let ux = (sol.u[ke] - sol.u[kw]) / (2.0 * h);
            let uy = (sol.u[kn] - sol.u[ks]) / (2.0 * h);
            let uxx = (sol.u[ke] - 2.0 * u + sol.u[kw]) / (h * h);
            let uyy = (sol.u[kn] - 2.0 * u + sol.u[ks]) / (h * h);
            let grad2 = ux * ux + uy * uy;
            let hess2 = uxx * uxx + uyy * uyy;
            let area = h * h;
            sums[0] += u.powi(2) * area;
            sums[1] += (u.powi(2) + grad2) * area;
            sums[2] += (u.powi(2) + grad2 + hess2) * area;
            sums[3] += u.powi(4) * area;
            sums[4] += (u.powi(4) + grad2.powi(2)) * area;
            sums[5] += (u.powi(4) + grad2.powi(2) + hess2.powi(2)) * area;
            count += 1;
        }
    }
    if count == 0 {
        return Err(AdsError::InvalidInput("sub-disc contains no nodes".into()));
    }
    let sobolev = [
        sums[0].sqrt(),
        sums[1].sqrt(),
        sums[2].sqrt(),
        sums[3].powf(0.25),
        sums[4].powf(0.25),
        sums[5].powf(0.25),
    ];
    // Holder quotient over sampled pairs at dyadic separations
    let mut holder: f64 = 0.0;
    let alpha = 0.5;
    for j in 1..n - 1 {
        for i in 1..n - 1 {
            let Some(k) = g.interior_index(i, j) else {
                continue;
            };
            if !inside(k) {
                continue;
            }
            for step in [1usize, 2, 4, 8] {
                if i + step < n {
                    if let Some(k2) = g.interior_index(i + step, j) {
                        if inside(k2) {
                            let dist = step as f64 * h;
                            holder =
                                holder.max((sol.u[k] - sol.u[k2]).abs() / dist.powf(alpha));
                        }
                    }
                }
            }
        }
    }
    Ok(FieldNorms {
        sobolev,
        holder_half: holder,
        sub_radius: r,
    })
}

/// Convergence pattern of a solution sequence: successive sup differences
/// on a compact sub-disc, plus the norms of each entry.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConvergenceReport {
    pub sup_differences: Vec<f64>,
    pub norms: Vec<FieldNorms>,
}

/// Diagnostics across a solution sequence on a common grid: reports the
/// discrete norms of each solution and the successive sup-differences on
/// the sub-disc of Euclidean radius r.
pub fn convergence_diagnostics(seq: &[&ConformalFactor], r: f64) -> Result<ConvergenceReport> {
    if seq.is_empty() {
        return Err(AdsError::InvalidInput("empty solution sequence".into()));
    }
    let mut norms = Vec::with_capacity(seq.len());
    for sol in seq {
        norms.push(field_norms(sol, r)?);
    }
    let mut sup_differences = Vec::new();
    for pair in seq.windows(2) {
        sup_differences.push(pair[0].sup_diff_on_subdisc(pair[1], r));
    }
    Ok(ConvergenceReport {
        sup_differences,
        norms,
    })
}
