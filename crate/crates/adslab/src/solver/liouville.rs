//! Damped Newton solver for the discretized Liouville equation
//! Lap_hyp u + e^{2u} K + 1 = 0 with Dirichlet data on a Euclidean disc.
//!
//! Each Newton step solves Lap_hyp delta + 2 e^{2u} K delta = -F(u); K < 0
//! makes the zeroth-order coefficient strictly negative, so the step is
//! uniquely solvable. The linear solves are matrix-free BiCGStab with
//! Jacobi preconditioning (the Shortley-Weller stencil is mildly
//! nonsymmetric at the boundary ring).

use super::grid::{Neighbor, SolveGrid};
use super::CurvatureField;
use crate::error::AdsError;
use crate::Result;

/// Dirichlet data on the solve-disc boundary.
#[derive(Debug, Clone, Copy)]
pub enum BoundaryData {
    Constant(f64),
    /// The constant-curvature far-field value -0.5 ln |K| at the crossing
    /// point; exact for fields that are constant near the boundary.
    FarField,
}

impl BoundaryData {
    fn value(&self, field: &CurvatureField, point: (f64, f64)) -> f64 {
        match self {
            BoundaryData::Constant(c) => *c,
            BoundaryData::FarField => -0.5 * field.eval_disc(point).abs().ln(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub linear_tol: f64,
    pub linear_max_iter: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            tol: 1e-10,
            max_iter: 200,
            linear_tol: 1e-13,
            linear_max_iter: 40_000,
        }
    }
}

/// The solved conformal factor on the grid.
#[derive(Debug, Clone)]
pub struct ConformalFactor {
    pub grid: SolveGrid,
    pub u: Vec<f64>,
    pub residual: f64,
    /// Final nodewise residual of the discrete equation.
    pub residual_field: Vec<f64>,
    pub newton_iterations: usize,
    pub boundary: &'static str,
}

impl ConformalFactor {
    pub fn value(&self, k: usize) -> f64 {
        self.u[k]
    }

    /// Bilinear interpolation of u at a disc point well inside the grid.
    pub fn interpolate(&self, x: f64, y: f64) -> Option<f64> {
        let g = &self.grid;
        let fx = (x + g.r_max) / g.h;
        let fy = (y + g.r_max) / g.h;
        let i = fx.floor() as isize;
        let j = fy.floor() as isize;
        if i < 0 || j < 0 {
            return None;
        }
        let (i, j) = (i as usize, j as usize);
        let sx = fx - i as f64;
        let sy = fy - j as f64;
        let mut acc = 0.0;
        for (di, dj, wgt) in [
            (0, 0, (1.0 - sx) * (1.0 - sy)),
            (1, 0, sx * (1.0 - sy)),
            (0, 1, (1.0 - sx) * sy),
            (1, 1, sx * sy),
        ] {
            let k = self.grid.interior_index(i + di, j + dj)?;
            acc += wgt * self.u[k];
        }
        Some(acc)
    }

    /// Sup difference against another factor on the sub-disc of Euclidean
    /// radius r, via interpolation on this factor's nodes.
    pub fn sup_diff_on_subdisc(&self, other: &ConformalFactor, r: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, node) in self.grid.nodes.iter().enumerate() {
            let (x, y) = node.xy;
            if x * x + y * y > r * r {
                continue;
            }
            if let Some(v) = other.interpolate(x, y) {
                worst = worst.max((self.u[k] - v).abs());
            }
        }
        worst
    }
}

// Shortley-Weller Euclidean Laplacian contribution of one axis:
// coefficients (c_minus, c_center, c_plus) for spacings (hm, hp)
fn sw_axis(h: f64, fm: f64, fp: f64) -> (f64, f64, f64) {
    let hm = fm * h;
    let hp = fp * h;
    (
        2.0 / (hm * (hm + hp)),
        -2.0 / (hm * hp),
        2.0 / (hp * (hm + hp)),
    )
}

struct Stencil {
    /// (neighbor index, coefficient) for interior couplings.
    interior: Vec<(usize, f64)>,
    center: f64,
    /// Fixed boundary contribution (coefficients times Dirichlet values).
    boundary: f64,
}

fn build_stencils(
    grid: &SolveGrid,
    field: &CurvatureField,
    data: &BoundaryData,
) -> Vec<Stencil> {
    let mut out = Vec::with_capacity(grid.len());
    for node in &grid.nodes {
        let mut st = Stencil {
            interior: Vec::with_capacity(4),
            center: 0.0,
            boundary: 0.0,
        };
        for (a, b) in [(&node.west, &node.east), (&node.south, &node.north)] {
            let fm = match a {
                Neighbor::Interior(_) => 1.0,
                Neighbor::Boundary { frac, .. } => *frac,
            };
            let fp = match b {
                Neighbor::Interior(_) => 1.0,
                Neighbor::Boundary { frac, .. } => *frac,
            };
            let (cm, cc, cp) = sw_axis(grid.h, fm, fp);
            st.center += cc;
            match a {
                Neighbor::Interior(k) => st.interior.push((*k, cm)),
                Neighbor::Boundary { point, .. } => {
                    st.boundary += cm * data.value(field, *point)
                }
            }
            match b {
                Neighbor::Interior(k) => st.interior.push((*k, cp)),
                Neighbor::Boundary { point, .. } => {
                    st.boundary += cp * data.value(field, *point)
                }
            }
        }
        out.push(st);
    }
    out
}

/// The discrete hyperbolic Laplacian of grid values at one node, by the
/// second-order Shortley-Weller stencil scaled with the conformal factor.
/// Errors when the node index is out of the interior numbering.
pub fn hyperbolic_laplacian(
    grid: &SolveGrid,
    values: &[f64],
    boundary_value: f64,
    node: usize,
) -> Result<f64> {
    if node >= grid.len() || values.len() != grid.len() {
        return Err(AdsError::StencilOutOfDomain);
    }
    let n = &grid.nodes[node];
    let mut acc = 0.0;
    for (a, b) in [(&n.west, &n.east), (&n.south, &n.north)] {
        let fm = match a {
            Neighbor::Interior(_) => 1.0,
            Neighbor::Boundary { frac, .. } => *frac,
        };
        let fp = match b {
            Neighbor::Interior(_) => 1.0,
            Neighbor::Boundary { frac, .. } => *frac,
        };
        let (cm, cc, cp) = sw_axis(grid.h, fm, fp);
        acc += cc * values[node];
        acc += cm * match a {
            Neighbor::Interior(k) => values[*k],
            Neighbor::Boundary { .. } => boundary_value,
        };
        acc += cp * match b {
            Neighbor::Interior(k) => values[*k],
            Neighbor::Boundary { .. } => boundary_value,
        };
    }
    Ok(grid.hyp_factor(node) * acc)
}

/// Solve the prescribed-curvature equation for the conformal factor.
///
/// The field is certified over the solve disc before running. Newton
/// iterations damp by step halving (floor 2^-10) and stop at the residual
/// tolerance or fail with `NoConvergence`.
pub fn solve_liouville(
    field: &CurvatureField,
    r_max: f64,
    n: usize,
    data: BoundaryData,
    cfg: &SolveConfig,
) -> Result<ConformalFactor> {
    let d_max = 2.0 * r_max.atanh();
    field.certify_negative(d_max + 1.0)?;
    let grid = SolveGrid::new(n, r_max)?;
    let stencils = build_stencils(&grid, field, &data);
    let k_vals: Vec<f64> = grid.nodes.iter().map(|nd| field.eval_disc(nd.xy)).collect();
    let hyp: Vec<f64> = (0..grid.len()).map(|k| grid.hyp_factor(k)).collect();

    // residual F(u) = Lap_hyp u + e^{2u} K + 1
    let residual_vec = |u: &[f64]| -> Vec<f64> {
        let mut f = vec![0.0; u.len()];
        for (k, st) in stencils.iter().enumerate() {
            let mut lap = st.center * u[k] + st.boundary;
            for &(j, c) in &st.interior {
                lap += c * u[j];
            }
            f[k] = hyp[k] * lap + (2.0 * u[k]).exp() * k_vals[k] + 1.0;
        }
        f
    };
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    // initial guess: the constant-curvature value from the local K
    let mut u: Vec<f64> = k_vals.iter().map(|k| -0.5 * k.abs().ln()).collect();
    let mut f = residual_vec(&u);
    let mut res = sup(&f);
    let mut iterations = 0;
    while res > cfg.tol {
        if iterations >= cfg.max_iter {
            return Err(AdsError::NoConvergence {
                what: "Newton iteration for the Liouville equation",
                iterations,
                residual: res,
            });
        }
        iterations += 1;
        // linearization coefficient 2 e^{2u} K (strictly negative)
        let c: Vec<f64> = u
            .iter()
            .zip(k_vals.iter())
            .map(|(ui, ki)| 2.0 * (2.0 * ui).exp() * ki)
            .collect();
        let apply = |v: &[f64], out: &mut [f64]| {
            for (k, st) in stencils.iter().enumerate() {
                let mut lap = st.center * v[k];
                for &(j, cf) in &st.interior {
                    lap += cf * v[j];
                }
                out[k] = hyp[k] * lap + c[k] * v[k];
            }
        };
        let diag: Vec<f64> = stencils
            .iter()
            .enumerate()
            .map(|(k, st)| hyp[k] * st.center + c[k])
            .collect();
        let rhs: Vec<f64> = f.iter().map(|x| -x).collect();
        let delta = bicgstab(apply, &diag, &rhs, cfg.linear_tol, cfg.linear_max_iter)?;

        // step halving until the residual decreases
        let mut eta = 1.0f64;
        loop {
            let trial: Vec<f64> = u
                .iter()
                .zip(delta.iter())
                .map(|(ui, di)| ui + eta * di)
                .collect();
            let tf = residual_vec(&trial);
            let tres = sup(&tf);
            if tres < res || eta < 3e-4 {
                u = trial;
                f = tf;
                res = tres;
                break;
            }
            eta /= 2.0;
        }
    }
    Ok(ConformalFactor {
        grid,
        u,
        residual: res,
        residual_field: f,
        newton_iterations: iterations,
        boundary: match data {
            BoundaryData::Constant(_) => "constant",
            BoundaryData::FarField => "far-field",
        },
    })
}

// matrix-free BiCGStab with Jacobi preconditioning
fn bicgstab<F: Fn(&[f64], &mut [f64])>(
    apply: F,
    diag: &[f64],
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let n = b.len();
    let dot = |a: &[f64], c: &[f64]| -> f64 { a.iter().zip(c).map(|(x, y)| x * y).sum() };
    let norm = |a: &[f64]| dot(a, a).sqrt();
    let precond = |v: &[f64], out: &mut Vec<f64>| {
        out.clear();
        out.extend(v.iter().zip(diag.iter()).map(|(x, d)| x / d));
    };

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let r0 = r.clone();
    let b_norm = norm(b).max(1e-300);
    if norm(&r) / b_norm <= tol {
        return Ok(x);
    }
    let mut rho = 1.0;
    let mut alpha = 1.0;
    let mut omega = 1.0;
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut phat = Vec::with_capacity(n);
    let mut shat = Vec::with_capacity(n);
    let mut t = vec![0.0; n];
    for _ in 0..max_iter {
        let rho_new = dot(&r0, &r);
        if rho_new.abs() < 1e-300 {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for k in 0..n {
            p[k] = r[k] + beta * (p[k] - omega * v[k]);
        }
        precond(&p, &mut phat);
        apply(&phat, &mut v);
        alpha = rho / dot(&r0, &v);
        let s: Vec<f64> = r.iter().zip(v.iter()).map(|(ri, vi)| ri - alpha * vi).collect();
        if norm(&s) / b_norm <= tol {
            for k in 0..n {
                x[k] += alpha * phat[k];
            }
            return Ok(x);
        }
        precond(&s, &mut shat);
        apply(&shat, &mut t);
        omega = dot(&t, &s) / dot(&t, &t).max(1e-300);
        for k in 0..n {
            x[k] += alpha * phat[k] + omega * shat[k];
            r[k] = s[k] - omega * t[k];
        }
        if norm(&r) / b_norm <= tol {
            return Ok(x);
        }
        if omega.abs() < 1e-300 {
            break;
        }
    }
    Err(AdsError::NoConvergence {
        what: "BiCGStab linear solve",
        iterations: max_iter,
        residual: norm(&r) / b_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_of_constants_and_coordinates() {
        let grid = SolveGrid::new(65, 0.8).unwrap();
        // constant: zero
        let ones = vec![1.0; grid.len()];
        for k in [0, grid.len() / 2, grid.len() - 1] {
            let v = hyperbolic_laplacian(&grid, &ones, 1.0, k).unwrap();
            assert!(v.abs() <= 1e-10, "Lap(const) = {v}");
        }
        // harmonic coordinate: zero to second order
        let xs: Vec<f64> = grid.nodes.iter().map(|n| n.xy.0).collect();
        let k = grid.len() / 2;
        let bx = grid.nodes[k].xy.0; // near-center node: boundary legs unused
        let v = hyperbolic_laplacian(&grid, &xs, bx, k).unwrap();
        assert!(v.abs() <= 1e-8, "Lap(x) = {v}");
    }

    #[test]
    fn laplacian_of_hyperbolic_conformal_factor_is_one() {
        // u = log(2 / (1 - |z|^2)) satisfies Lap_hyp u = 1
        let grid = SolveGrid::new(129, 0.7).unwrap();
        let u: Vec<f64> = grid
            .nodes
            .iter()
            .map(|n| (2.0 / (1.0 - n.xy.0 * n.xy.0 - n.xy.1 * n.xy.1)).ln())
            .collect();
        // test only at nodes with full interior stencils
        let mut checked = 0;
        for (k, node) in grid.nodes.iter().enumerate() {
            let all_interior = [&node.east, &node.west, &node.north, &node.south]
                .iter()
                .all(|nb| matches!(nb, Neighbor::Interior(_)));
            if !all_interior {
                continue;
            }
            let v = hyperbolic_laplacian(&grid, &u, 0.0, k).unwrap();
            assert!((v - 1.0).abs() <= 1e-3, "Lap_hyp u = {v} at node {k}");
            checked += 1;
        }
        assert!(checked > 100);
    }

    #[test]
    fn constant_curvature_solutions_are_exact() {
        // K = -1 with boundary 0: u = 0
        let field = CurvatureField::constant(-1.0, 1e-4).unwrap();
        let sol = solve_liouville(
            &field,
            0.9,
            65,
            BoundaryData::Constant(0.0),
            &SolveConfig::default(),
        )
        .unwrap();
        assert!(sol.residual <= 1e-12);
        for v in &sol.u {
            assert!(v.abs() <= 1e-12);
        }

        // K = -4 with boundary -ln 2: u = -ln 2
        let field = CurvatureField::constant(-4.0, 0.2).unwrap();
        let sol = solve_liouville(
            &field,
            0.9,
            65,
            BoundaryData::Constant(-(2f64.ln())),
            &SolveConfig::default(),
        )
        .unwrap();
        let target = -(2f64.ln());
        for v in &sol.u {
            assert!((v - target).abs() <= 1e-10);
        }
    }

    #[test]
    fn comparison_principle() {
        // K1 <= K2 pointwise with equal boundary data forces u1 <= u2
        let k1 = CurvatureField::radial_gauss(0.4, 0.8).unwrap(); // in [-2.5, -1.8]
        let k2 = CurvatureField::constant(-1.8, 0.4).unwrap();
        let cfg = SolveConfig::default();
        let u1 = solve_liouville(&k1, 0.9, 65, BoundaryData::Constant(0.0), &cfg).unwrap();
        let u2 = solve_liouville(&k2, 0.9, 65, BoundaryData::Constant(0.0), &cfg).unwrap();
        for (a, b) in u1.u.iter().zip(u2.u.iter()) {
            assert!(*a <= b + 1e-8, "comparison violated: {a} > {b}");
        }
    }

    #[test]
    fn iteration_cap_surfaces_no_convergence() {
        let field = CurvatureField::radial_gauss(0.5, 0.75).unwrap();
        let cfg = SolveConfig {
            max_iter: 0,
            ..SolveConfig::default()
        };
        assert!(matches!(
            solve_liouville(&field, 0.9, 65, BoundaryData::FarField, &cfg),
            Err(AdsError::NoConvergence { .. })
        ));
    }

    #[test]
    fn newton_iteration_count_is_small() {
        let field = CurvatureField::radial_gauss(0.5, 0.75).unwrap();
        let sol = solve_liouville(
            &field,
            0.9,
            129,
            BoundaryData::FarField,
            &SolveConfig::default(),
        )
        .unwrap();
        assert!(sol.residual <= 1e-10);
        assert!(sol.newton_iterations <= 30, "{} iterations", sol.newton_iterations);
    }
}
