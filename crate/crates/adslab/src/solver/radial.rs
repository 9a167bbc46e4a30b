//! Independent radial oracle for the Liouville equation: for a radial
//! curvature field, reduce to the geodesic-polar ODE
//! u'' + coth(rho) u' + e^{2u} K(rho) + 1 = 0 and solve the boundary value
//! problem by shooting on the center value. The integrator and the
//! discretization are disjoint from the 2-D finite-difference path.

use super::CurvatureField;
use crate::error::AdsError;
use crate::Result;

/// Dense radial solution u(rho) on [0, rho_max].
#[derive(Debug, Clone)]
pub struct RadialSolution {
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
}

impl RadialSolution {
    pub fn eval(&self, rho: f64) -> f64 {
        let n = self.rho.len();
        if rho <= self.rho[0] {
            return self.u[0];
        }
        if rho >= self.rho[n - 1] {
            return self.u[n - 1];
        }
        let h = self.rho[1] - self.rho[0];
        let i = ((rho - self.rho[0]) / h) as usize;
        let i = i.min(n - 2);
        let s = (rho - self.rho[i]) / (self.rho[i + 1] - self.rho[i]);
        self.u[i] * (1.0 - s) + self.u[i + 1] * s
    }
}

// integrate the ODE from a series start at the center with u(0) = a,
// u'(0) = 0, returning samples on a uniform rho grid
fn integrate(field: &CurvatureField, a: f64, rho_max: f64, steps: usize) -> RadialSolution {
    let h = rho_max / steps as f64;
    let rho0 = 1e-4;
    // series: u(rho) ~ a - (e^{2a} K(0) + 1) rho^2 / 4
    let c2 = -((2.0 * a).exp() * field.eval_radial(0.0) + 1.0) / 4.0;
    let mut rho = rho0;
    let mut u = a + c2 * rho0 * rho0;
    let mut up = 2.0 * c2 * rho0;
    let rhs = |rho: f64, u: f64, up: f64| -> f64 {
        -(1.0 / rho.tanh()) * up - (2.0 * u).exp() * field.eval_radial(rho) - 1.0
    };
    let mut out_rho = Vec::with_capacity(steps + 1);
    let mut out_u = Vec::with_capacity(steps + 1);
    out_rho.push(0.0);
    out_u.push(a);
    let sub = 4usize; // RK4 substeps per output node
    for k in 1..=steps {
        let target = k as f64 * h;
        let dt = (target - rho) / sub as f64;
        for _ in 0..sub {
            let (k1u, k1p) = (up, rhs(rho, u, up));
            let (k2u, k2p) = (
                up + 0.5 * dt * k1p,
                rhs(rho + 0.5 * dt, u + 0.5 * dt * k1u, up + 0.5 * dt * k1p),
            );
            let (k3u, k3p) = (
                up + 0.5 * dt * k2p,
                rhs(rho + 0.5 * dt, u + 0.5 * dt * k2u, up + 0.5 * dt * k2p),
            );
            let (k4u, k4p) = (up + dt * k3p, rhs(rho + dt, u + dt * k3u, up + dt * k3p));
            u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            up += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            rho += dt;
        }
        out_rho.push(rho);
        out_u.push(u);
    }
    RadialSolution {
        rho: out_rho,
        u: out_u,
    }
}

/// Shooting oracle: find the center value so that u(rho_max) matches the
/// boundary value, by bisection on the monotone dependence.
pub fn radial_oracle(
    field: &CurvatureField,
    rho_max: f64,
    boundary_value: f64,
    steps: usize,
) -> Result<RadialSolution> {
    if !field.is_radial() {
        return Err(AdsError::InvalidInput("radial oracle needs a radial field".into()));
    }
    let end = |a: f64| -> f64 {
        let sol = integrate(field, a, rho_max, steps);
        sol.u[sol.u.len() - 1] - boundary_value
    };
    // bracket the root around the constant-curvature guess
    let guess = -0.5 * field.eval_radial(0.0).abs().ln();
    let mut lo = guess - 2.0;
    let mut hi = guess + 2.0;
    let mut flo = end(lo);
    let mut fhi = end(hi);
    let mut widen = 0;
    while flo.signum() == fhi.signum() {
        lo -= 1.0;
        hi += 1.0;
        flo = end(lo);
        fhi = end(hi);
        widen += 1;
        if widen > 12 {
            return Err(AdsError::NoConvergence {
                what: "radial shooting bracket",
                iterations: widen,
                residual: flo.abs().min(fhi.abs()),
            });
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fmid = end(mid);
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(integrate(field, 0.5 * (lo + hi), rho_max, steps))
}
