//! Prescribed-curvature conformal metrics on the disc.
//!
//! The conformal factor u of h = e^{2u} h_hyp satisfies the semilinear
//! equation Lap_hyp u + e^{2u} K + 1 = 0 with Lap_hyp the hyperbolic
//! Laplacian ((1-|z|^2)^2/4 times the Euclidean one). Curvature fields are
//! certified against a declared pinching interval (-1/eps, -1-eps) before a
//! solve; the blending construction interpolates a field with the constant
//! -1/eps across a cutoff annulus and extends over a Fuchsian group by a
//! reduction walk.

mod blend;
mod bounds;
mod diagnostics;
mod grid;
mod invariant;
pub mod liouville;
mod radial;

pub use blend::{blend_curvature, bump, BlendSpec};
pub use bounds::{derivative_bounds_check, DerivativeBounds};
pub use diagnostics::{convergence_diagnostics, field_norms, ConvergenceReport, FieldNorms};
pub use grid::SolveGrid;
pub use invariant::{invariance_residual, reflect_invariant};
pub use liouville::{hyperbolic_laplacian, solve_liouville, BoundaryData, ConformalFactor, SolveConfig};
pub use radial::{radial_oracle, RadialSolution};

use crate::circle::FuchsianGroup;
use crate::error::AdsError;
use crate::expr::Expr;
use crate::Result;
use std::sync::Arc;

/// Hyperbolic distance of a disc point to the origin.
pub fn hyperbolic_radius(w: (f64, f64)) -> f64 {
    2.0 * (w.0 * w.0 + w.1 * w.1).sqrt().atanh()
}

/// Euclidean disc radius at a given hyperbolic radius.
pub fn euclidean_radius(d: f64) -> f64 {
    (d / 2.0).tanh()
}

/// How a curvature field is evaluated.
#[derive(Debug, Clone)]
pub enum FieldKind {
    Constant(f64),
    /// far + delta * exp(-d^2): a radial bump anchored at `far`.
    RadialGauss { far: f64, delta: f64 },
    /// Closed-form expression in x, y, r2, d.
    Expr(Arc<Expr>),
    /// Cutoff blend toward the constant -1/eps outside the ball of
    /// hyperbolic radius 2 r_n.
    Blend {
        base: Arc<CurvatureField>,
        spec: BlendSpec,
    },
    /// Group-invariant extension of a field given on a fundamental domain.
    Invariant {
        base: Arc<CurvatureField>,
        group: Arc<FuchsianGroup>,
        step_cap: usize,
    },
}

/// Prescribed curvature on the disc with the declared pinching constant and
/// derivative bounds.
#[derive(Debug, Clone)]
pub struct CurvatureField {
    pub kind: FieldKind,
    /// Declared pinching: values must lie in [-1/epsilon, -1-epsilon].
    pub epsilon: f64,
    /// Declared hyperbolic-normalized derivative bounds (order, M_p).
    pub bounds: Vec<(usize, f64)>,
}

impl CurvatureField {
    pub fn new(kind: FieldKind, epsilon: f64) -> Result<CurvatureField> {
        if epsilon <= 0.0 || 1.0 / epsilon <= 1.0 + epsilon {
            return Err(AdsError::BadCurvatureRange {
                reason: format!("empty pinching interval for epsilon = {epsilon}"),
            });
        }
        Ok(CurvatureField {
            kind,
            epsilon,
            bounds: Vec::new(),
        })
    }

    pub fn with_bounds(mut self, bounds: Vec<(usize, f64)>) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn constant(k: f64, epsilon: f64) -> Result<CurvatureField> {
        CurvatureField::new(FieldKind::Constant(k), epsilon)
    }

    /// The standard radial fixture K = -1/eps + (1/eps - 1 - gap) e^{-d^2}:
    /// range [-1/eps, -1 - gap], anchored at the outer constant.
    pub fn radial_gauss(epsilon: f64, gap: f64) -> Result<CurvatureField> {
        let far = -1.0 / epsilon;
        let delta = 1.0 / epsilon - 1.0 - gap;
        if delta <= 0.0 || gap <= epsilon {
            return Err(AdsError::BadCurvatureRange {
                reason: "radial bump needs gap in (epsilon, 1/epsilon - 1)".into(),
            });
        }
        CurvatureField::new(FieldKind::RadialGauss { far, delta }, epsilon)
    }

    /// Is the field a function of the hyperbolic radius only?
    pub fn is_radial(&self) -> bool {
        match &self.kind {
            FieldKind::Constant(_) | FieldKind::RadialGauss { .. } => true,
            FieldKind::Expr(e) => e.is_radial(),
            FieldKind::Blend { base, .. } => base.is_radial(),
            FieldKind::Invariant { .. } => false,
        }
    }

    /// Evaluate as a function of the hyperbolic radius; callers must ensure
    /// [`CurvatureField::is_radial`].
    pub fn eval_radial(&self, d: f64) -> f64 {
        match &self.kind {
            FieldKind::Constant(k) => *k,
            FieldKind::RadialGauss { far, delta } => far + delta * (-d * d).exp(),
            FieldKind::Expr(e) => e.eval(0.0, 0.0, d),
            FieldKind::Blend { base, spec } => spec.blend(base.eval_radial(d), d),
            FieldKind::Invariant { .. } => f64::NAN,
        }
    }

    /// Evaluate at a disc point.
    pub fn eval_disc(&self, w: (f64, f64)) -> f64 {
        let d = hyperbolic_radius(w);
        match &self.kind {
            FieldKind::Constant(k) => *k,
            FieldKind::RadialGauss { far, delta } => far + delta * (-d * d).exp(),
            FieldKind::Expr(e) => e.eval(w.0, w.1, d),
            FieldKind::Blend { base, spec } => spec.blend(base.eval_disc(w), d),
            FieldKind::Invariant {
                base,
                group,
                step_cap,
            } => {
                let z = crate::surface::disc_to_halfplane(w);
                match group.reduce(z, *step_cap) {
                    Ok((reduced, _)) => {
                        base.eval_disc(crate::surface::halfplane_to_disc(reduced))
                    }
                    Err(_) => f64::NAN,
                }
            }
        }
    }

    /// Solver-grade certification: the field must be strictly negative on
    /// the audit region (the pinching interval is not required here; the
    /// existence contract for the disc equation only needs K < 0).
    pub fn certify_negative(&self, d_max: f64) -> Result<()> {
        let audit = 10_000usize;
        let check = |v: f64, whr: String| -> Result<()> {
            if !v.is_finite() || v > -1e-8 {
                return Err(AdsError::BadCurvatureRange {
                    reason: format!("value {v:.6} at {whr} is not strictly negative"),
                });
            }
            Ok(())
        };
        if self.is_radial() {
            for i in 0..audit {
                let d = d_max * i as f64 / (audit - 1) as f64;
                check(self.eval_radial(d), format!("radius {d:.3}"))?;
            }
        } else {
            let n = 100usize;
            for i in 0..n {
                for j in 0..n {
                    let d = d_max * i as f64 / (n - 1) as f64;
                    let phi = std::f64::consts::TAU * j as f64 / n as f64;
                    let r = euclidean_radius(d);
                    check(
                        self.eval_disc((r * phi.cos(), r * phi.sin())),
                        format!("(d, phi) = ({d:.3}, {phi:.3})"),
                    )?;
                }
            }
        }
        Ok(())
    }

    /// Range certification on an audit grid and, when derivative bounds are
    /// declared, a finite-difference audit of those too.
    pub fn certify(&self, d_max: f64) -> Result<()> {
        let lo = -1.0 / self.epsilon - 1e-9;
        let hi = -1.0 - self.epsilon + 1e-9;
        let audit = 10_000usize;
        if self.is_radial() {
            for i in 0..audit {
                let d = d_max * i as f64 / (audit - 1) as f64;
                let v = self.eval_radial(d);
                if !(lo..=hi).contains(&v) {
                    return Err(AdsError::BadCurvatureRange {
                        reason: format!("value {v:.6} at radius {d:.3} outside [{lo:.3}, {hi:.3}]"),
                    });
                }
            }
        } else {
            let n = 100usize;
            for i in 0..n {
                for j in 0..n {
                    let d = d_max * i as f64 / (n - 1) as f64;
                    let phi = std::f64::consts::TAU * j as f64 / n as f64;
                    let r = euclidean_radius(d);
                    let v = self.eval_disc((r * phi.cos(), r * phi.sin()));
                    if !v.is_finite() || !(lo..=hi).contains(&v) {
                        return Err(AdsError::BadCurvatureRange {
                            reason: format!(
                                "value {v:.6} at (d, phi) = ({d:.3}, {phi:.3}) outside range"
                            ),
                        });
                    }
                }
            }
        }
        if !self.bounds.is_empty() {
            let measured = derivative_bounds_check(self, 3, d_max)?;
            for &(p, m_p) in &self.bounds {
                if p >= 1 && p <= 3 {
                    let got = measured.sup[p - 1];
                    if got > m_p {
                        return Err(AdsError::BadCurvatureRange {
                            reason: format!(
                                "declared order-{p} bound {m_p} exceeded: measured {got:.6}"
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}
