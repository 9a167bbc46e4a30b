//! First and second fundamental forms, shape operator, principal
//! curvatures, and the induced Gauss curvature.
//!
//! Everything is computed by central finite differences of the chart
//! positions in the polar parameter (r, theta); theta wraps, radial ends
//! are excluded. The Gauss curvature of the induced metric is computed
//! independently from I alone (Brioschi), so the relation
//! K_I = -1 - det B can be audited rather than assumed.

use super::SpacelikeChart;
use crate::ads::{pair22, Vec22};
use crate::error::AdsError;
use crate::Result;

/// Forms at one grid node, in the (d_r, d_theta) coordinate basis.
#[derive(Debug, Clone, Copy)]
pub struct NodeForms {
    /// First fundamental form [[E, F], [F, G]].
    pub i: [[f64; 2]; 2],
    /// Shape operator (mixed indices), I-self-adjoint.
    pub b: [[f64; 2]; 2],
    /// Complex structure of I (rotation by +90 degrees).
    pub j: [[f64; 2]; 2],
    /// Principal curvatures, kappa1 >= kappa2.
    pub kappa: (f64, f64),
    /// Unit future timelike normal.
    pub normal: Vec22,
}

/// Forms over the interior nodes of a chart.
#[derive(Debug, Clone)]
pub struct FormsField {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_min: f64,
    pub h_r: f64,
    /// Fixed reporting region: residual sups run over nodes with radius in
    /// [r_report_min, r_report], so that refinement studies keep a fixed
    /// domain (polar coordinates degenerate at the center, the metric grows
    /// toward the rim).
    pub r_report_min: f64,
    pub r_report: f64,
    /// r-range of interior nodes: [2, n_r - 3] to leave room for the
    /// Brioschi stencil on I.
    pub forms: Vec<Option<NodeForms>>,
    /// Gauss curvature of I from the Brioschi formula (independent of B).
    pub k_gauss: Vec<Option<f64>>,
}

impl FormsField {
    pub fn at(&self, ir: usize, it: usize) -> Option<&NodeForms> {
        self.forms[ir * self.n_theta + it % self.n_theta].as_ref()
    }

    pub fn k_at(&self, ir: usize, it: usize) -> Option<f64> {
        self.k_gauss[ir * self.n_theta + it % self.n_theta]
    }

    pub fn radius_of(&self, ir: usize) -> f64 {
        self.r_min + ir as f64 * self.h_r
    }

    pub fn in_report_region(&self, ir: usize) -> bool {
        let r = self.radius_of(ir);
        self.r_report_min <= r && r <= self.r_report
    }

    /// Max |K_I + 1 + det B| over report-region nodes where both sides exist.
    pub fn gauss_relation_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for ir in 0..self.n_r {
            if !self.in_report_region(ir) {
                continue;
            }
            for it in 0..self.n_theta {
                if let (Some(f), Some(k)) = (self.at(ir, it), self.k_at(ir, it)) {
                    let det_b = f.b[0][0] * f.b[1][1] - f.b[0][1] * f.b[1][0];
                    worst = worst.max((k + 1.0 + det_b).abs());
                }
            }
        }
        worst
    }

    /// Nodewise Gauss-relation residual rows for the residual CSV.
    pub fn gauss_rows(&self) -> Vec<(usize, &'static str, f64)> {
        let mut out = Vec::new();
        for ir in 0..self.n_r {
            if !self.in_report_region(ir) {
                continue;
            }
            for it in 0..self.n_theta {
                if let (Some(f), Some(k)) = (self.at(ir, it), self.k_at(ir, it)) {
                    let det_b = f.b[0][0] * f.b[1][1] - f.b[0][1] * f.b[1][0];
                    out.push((
                        ir * self.n_theta + it,
                        "gauss_relation_residual",
                        (k + 1.0 + det_b).abs(),
                    ));
                }
            }
        }
        out
    }

    /// Max |I(Bv, w) - I(v, Bw)| normalized, over a basis probe.
    pub fn self_adjointness_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for f in self.forms.iter().flatten() {
            // I B as a bilinear form must be symmetric
            let ib01 = f.i[0][0] * f.b[0][1] + f.i[0][1] * f.b[1][1];
            let ib10 = f.i[1][0] * f.b[0][0] + f.i[1][1] * f.b[1][0];
            let scale = f.i[0][0].abs() + f.i[1][1].abs();
            worst = worst.max((ib01 - ib10).abs() / scale);
        }
        worst
    }
}

fn mat2x2_inv(m: &[[f64; 2]; 2]) -> Option<[[f64; 2]; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() < 1e-300 {
        return None;
    }
    Some([
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ])
}

/// Finite-difference fundamental forms over the chart grid.
pub fn fundamental_forms(chart: &SpacelikeChart) -> Result<FormsField> {
    let n_r = chart.grid.n_r;
    let n_t = chart.grid.n_theta;
    let hr = chart.grid.h_r();
    let ht = chart.grid.h_theta();

    let p = |ir: usize, it: isize| -> &Vec22 {
        let it = it.rem_euclid(n_t as isize) as usize;
        chart.point(ir, it)
    };

    // first pass: I, B, J, kappa at nodes with a full first/second stencil
    let mut forms: Vec<Option<NodeForms>> = vec![None; n_r * n_t];
    let mut i_field: Vec<Option<[[f64; 2]; 2]>> = vec![None; n_r * n_t];
    for ir in 1..n_r - 1 {
        for it in 0..n_t {
            let iti = it as isize;
            let dr = p(ir + 1, iti).sub(p(ir - 1, iti)).scale(1.0 / (2.0 * hr));
            let dt = p(ir, iti + 1).sub(p(ir, iti - 1)).scale(1.0 / (2.0 * ht));
            let drr = p(ir + 1, iti)
                .add(p(ir - 1, iti))
                .sub(&p(ir, iti).scale(2.0))
                .scale(1.0 / (hr * hr));
            let dtt = p(ir, iti + 1)
                .add(p(ir, iti - 1))
                .sub(&p(ir, iti).scale(2.0))
                .scale(1.0 / (ht * ht));
            let drt = p(ir + 1, iti + 1)
                .sub(p(ir + 1, iti - 1))
                .sub(p(ir - 1, iti + 1))
                .add(p(ir - 1, iti - 1))
                .scale(1.0 / (4.0 * hr * ht));

            let e = pair22(&dr, &dr);
            let f = pair22(&dr, &dt);
            let g = pair22(&dt, &dt);
            let det_i = e * g - f * f;
            if e <= 0.0 || det_i <= 0.0 {
                return Err(AdsError::NotSpacelike {
                    node: chart.idx(ir, it),
                    det_i,
                });
            }
            let i_mat = [[e, f], [f, g]];
            i_field[ir * n_t + it] = Some(i_mat);

            // q-orthogonal unit future normal from metric-adjusted cofactors
            let pos = p(ir, iti);
            let rows = [*pos, dr, dt];
            let n_raw = cross4(&rows);
            // adjust indices: q = diag(1,1,-1,-1)
            let n_metric = Vec22::new(n_raw.x1, n_raw.x2, -n_raw.x3, -n_raw.x4);
            let qn = crate::ads::q22(&n_metric);
            if qn >= -1e-12 {
                return Err(AdsError::NotSpacelike {
                    node: chart.idx(ir, it),
                    det_i,
                });
            }
            let mut normal = n_metric.scale(1.0 / (-qn).sqrt());
            if pair22(&normal, &pos.time_field()) > 0.0 {
                normal = normal.scale(-1.0);
            }

            let ii = [
                [pair22(&normal, &drr), pair22(&normal, &drt)],
                [pair22(&normal, &drt), pair22(&normal, &dtt)],
            ];
            let i_inv = mat2x2_inv(&i_mat).expect("det checked");
            let b = [
                [
                    i_inv[0][0] * ii[0][0] + i_inv[0][1] * ii[1][0],
                    i_inv[0][0] * ii[0][1] + i_inv[0][1] * ii[1][1],
                ],
                [
                    i_inv[1][0] * ii[0][0] + i_inv[1][1] * ii[1][0],
                    i_inv[1][0] * ii[0][1] + i_inv[1][1] * ii[1][1],
                ],
            ];
            // orientation convention: the one for which the left pullback
            // identity reads I((E + J B) ., (E + J B) .)
            let sqrt_det = det_i.sqrt();
            let j = [
                [f / sqrt_det, g / sqrt_det],
                [-e / sqrt_det, -f / sqrt_det],
            ];
            let tr_b = b[0][0] + b[1][1];
            let det_b = b[0][0] * b[1][1] - b[0][1] * b[1][0];
            let disc = (tr_b * tr_b - 4.0 * det_b).max(0.0).sqrt();
            let kappa = ((tr_b + disc) / 2.0, (tr_b - disc) / 2.0);

            forms[ir * n_t + it] = Some(NodeForms {
                i: i_mat,
                b,
                j,
                kappa,
                normal,
            });
        }
    }

    // second pass: Brioschi Gauss curvature from I alone
    let mut k_gauss: Vec<Option<f64>> = vec![None; n_r * n_t];
    let comp = |ir: usize, it: isize, which: usize| -> Option<f64> {
        if ir == 0 || ir >= n_r - 1 {
            return None;
        }
        let it = it.rem_euclid(n_t as isize) as usize;
        i_field[ir * n_t + it].map(|m| match which {
            0 => m[0][0],
            1 => m[0][1],
            _ => m[1][1],
        })
    };
    for ir in 2..n_r.saturating_sub(2) {
        for it in 0..n_t {
            let iti = it as isize;
            let get = |w: usize, dir: (isize, isize)| -> f64 {
                comp((ir as isize + dir.0) as usize, iti + dir.1, w).unwrap()
            };
            let e = get(0, (0, 0));
            let f = get(1, (0, 0));
            let g = get(2, (0, 0));
            // first derivatives (u = r, v = theta)
            let e_u = (get(0, (1, 0)) - get(0, (-1, 0))) / (2.0 * hr);
            let e_v = (get(0, (0, 1)) - get(0, (0, -1))) / (2.0 * ht);
            let g_u = (get(2, (1, 0)) - get(2, (-1, 0))) / (2.0 * hr);
            let g_v = (get(2, (0, 1)) - get(2, (0, -1))) / (2.0 * ht);
            let f_u = (get(1, (1, 0)) - get(1, (-1, 0))) / (2.0 * hr);
            let f_v = (get(1, (0, 1)) - get(1, (0, -1))) / (2.0 * ht);
            let e_vv = (get(0, (0, 1)) - 2.0 * e + get(0, (0, -1))) / (ht * ht);
            let g_uu = (get(2, (1, 0)) - 2.0 * g + get(2, (-1, 0))) / (hr * hr);
            let f_uv = (get(1, (1, 1)) - get(1, (1, -1)) - get(1, (-1, 1)) + get(1, (-1, -1)))
                / (4.0 * hr * ht);

            let det3 = |m: [[f64; 3]; 3]| -> f64 {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                    - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            };
            let m1 = [
                [
                    -0.5 * e_vv + f_uv - 0.5 * g_uu,
                    0.5 * e_u,
                    f_u - 0.5 * e_v,
                ],
                [f_v - 0.5 * g_u, e, f],
                [0.5 * g_v, f, g],
            ];
            let m2 = [
                [0.0, 0.5 * e_v, 0.5 * g_u],
                [0.5 * e_v, e, f],
                [0.5 * g_u, f, g],
            ];
            let det_i = e * g - f * f;
            k_gauss[ir * n_t + it] = Some((det3(m1) - det3(m2)) / (det_i * det_i));
        }
    }

    Ok(FormsField {
        n_r,
        n_theta: n_t,
        r_min: chart.grid.r_min,
        h_r: hr,
        r_report_min: chart.grid.r_min + 0.12 * (chart.grid.r_max - chart.grid.r_min),
        r_report: 0.8 * chart.grid.r_max,
        forms,
        k_gauss,
    })
}

// future unit normal of the equidistant family, pushed through isometries
fn analytic_normal(kind: &super::ChartKind, w: (f64, f64)) -> Option<Vec22> {
    match kind {
        super::ChartKind::Equidistant { t } => {
            let z = super::disc_to_halfplane(w);
            let m = super::rotation_about(z).scale(-t.sin())
                + crate::mat2::Mat2::identity().scale(t.cos());
            Some(crate::ads::from_matrix(&m))
        }
        super::ChartKind::IsometryImage { base, iso } => {
            Some(iso.act_vec(&analytic_normal(base, w)?))
        }
        super::ChartKind::Graph { .. } | super::ChartKind::GraphExpr { .. } => None,
    }
}

/// Closed-form fundamental forms for the equidistant family (and isometric
/// images, whose forms agree in the shared parametrization). Returns None
/// for chart kinds without a closed form.
pub fn analytic_forms(chart: &SpacelikeChart) -> Option<FormsField> {
    fn equidistant_t(kind: &super::ChartKind) -> Option<f64> {
        match kind {
            super::ChartKind::Equidistant { t } => Some(*t),
            super::ChartKind::IsometryImage { base, .. } => equidistant_t(base),
            super::ChartKind::Graph { .. } | super::ChartKind::GraphExpr { .. } => None,
        }
    }
    let t = equidistant_t(&chart.kind)?;
    let n_r = chart.grid.n_r;
    let n_t = chart.grid.n_theta;
    let mut forms: Vec<Option<NodeForms>> = vec![None; n_r * n_t];
    let mut k_gauss: Vec<Option<f64>> = vec![None; n_r * n_t];
    let k_val = -1.0 / (t.cos() * t.cos());
    for ir in 0..n_r {
        let r = chart.grid.r_min + ir as f64 * chart.grid.h_r();
        let lam = t.cos().powi(2) * 4.0 / (1.0 - r * r).powi(2);
        let i_mat = [[lam, 0.0], [0.0, lam * r * r]];
        let sqrt_det = lam * r;
        let j = [
            [0.0, lam * r * r / sqrt_det],
            [-lam / sqrt_det, 0.0],
        ];
        let b = [[t.tan(), 0.0], [0.0, t.tan()]];
        for it in 0..n_t {
            let w = chart.node_disc(ir, it);
            let normal = analytic_normal(&chart.kind, w)?;
            forms[ir * n_t + it] = Some(NodeForms {
                i: i_mat,
                b,
                j,
                kappa: (t.tan(), t.tan()),
                normal,
            });
            k_gauss[ir * n_t + it] = Some(k_val);
        }
    }
    Some(FormsField {
        n_r,
        n_theta: n_t,
        r_min: chart.grid.r_min,
        h_r: chart.grid.h_r(),
        r_report_min: chart.grid.r_min + 0.12 * (chart.grid.r_max - chart.grid.r_min),
        r_report: 0.8 * chart.grid.r_max,
        forms,
        k_gauss,
    })
}

// generalized cross product: the euclidean-orthogonal complement of three
// vectors in R^4, by cofactor expansion
fn cross4(rows: &[Vec22; 3]) -> Vec22 {
    let m = [
        [rows[0].x1, rows[0].x2, rows[0].x3, rows[0].x4],
        [rows[1].x1, rows[1].x2, rows[1].x3, rows[1].x4],
        [rows[2].x1, rows[2].x2, rows[2].x3, rows[2].x4],
    ];
    let det3 = |c0: usize, c1: usize, c2: usize| -> f64 {
        m[0][c0] * (m[1][c1] * m[2][c2] - m[1][c2] * m[2][c1])
            - m[0][c1] * (m[1][c0] * m[2][c2] - m[1][c2] * m[2][c0])
            + m[0][c2] * (m[1][c0] * m[2][c1] - m[1][c1] * m[2][c0])
    };
    Vec22::new(det3(1, 2, 3), -det3(0, 2, 3), det3(0, 1, 3), -det3(0, 1, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{ChartKind, GridSpec, SpacelikeChart};

    fn interior_max<Fm: Fn(&NodeForms) -> f64>(field: &FormsField, f: Fm) -> f64 {
        field.forms.iter().flatten().map(f).fold(0.0, f64::max)
    }

    #[test]
    fn totally_geodesic_plane_has_vanishing_shape_operator() {
        let chart = SpacelikeChart::equidistant(0.0, GridSpec::default()).unwrap();
        let field = fundamental_forms(&chart).unwrap();
        let max_b = interior_max(&field, |f| {
            f.b.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max)
        });
        assert!(max_b <= 1e-8, "B should vanish, max entry {max_b:.3e}");
        // K_I = -1 to discretization accuracy (the order test below pins
        // the rate)
        assert!(field.gauss_relation_residual() <= 5e-2);
        for ir in 0..field.n_r {
            if !field.in_report_region(ir) {
                continue;
            }
            for it in 0..field.n_theta {
                if let Some(k) = field.k_at(ir, it) {
                    assert!((k + 1.0).abs() <= 5e-2, "K = {k}");
                }
            }
        }
    }

    #[test]
    fn equidistant_quarter_pi_is_umbilic_with_unit_curvature() {
        let t = std::f64::consts::FRAC_PI_4;
        let chart = SpacelikeChart::equidistant(t, GridSpec::default()).unwrap();
        // analytic closure: exact values
        let exact = analytic_forms(&chart).unwrap();
        for f in exact.forms.iter().flatten() {
            assert!((f.kappa.0 - 1.0).abs() <= 1e-12);
            assert!((f.kappa.1 - 1.0).abs() <= 1e-12);
        }
        for k in exact.k_gauss.iter().flatten() {
            assert!((k + 2.0).abs() <= 1e-12);
        }
        // finite differences agree to discretization accuracy
        let field = fundamental_forms(&chart).unwrap();
        for ir in 0..field.n_r {
            if !field.in_report_region(ir) {
                continue;
            }
            for it in 0..field.n_theta {
                let f = field.at(ir, it).unwrap();
                assert!((f.kappa.0 - 1.0).abs() <= 1e-2, "kappa1 {}", f.kappa.0);
                assert!((f.kappa.1 - 1.0).abs() <= 1e-2, "kappa2 {}", f.kappa.1);
            }
        }
    }

    #[test]
    fn gauss_relation_and_convergence_order() {
        let t = std::f64::consts::FRAC_PI_6;
        let coarse = GridSpec {
            n_r: 17,
            n_theta: 24,
            ..GridSpec::default()
        };
        let fine = coarse.refined();
        let r_coarse = {
            let chart = SpacelikeChart::equidistant(t, coarse).unwrap();
            fundamental_forms(&chart).unwrap().gauss_relation_residual()
        };
        let r_fine = {
            let chart = SpacelikeChart::equidistant(t, fine).unwrap();
            fundamental_forms(&chart).unwrap().gauss_relation_residual()
        };
        let order = (r_coarse / r_fine).log2();
        assert!(
            (order - 2.0).abs() <= 0.2,
            "convergence order {order:.3} (residuals {r_coarse:.3e} -> {r_fine:.3e})"
        );
    }

    #[test]
    fn shape_operator_is_self_adjoint() {
        let chart = SpacelikeChart::new(
            ChartKind::Graph {
                t0: std::f64::consts::FRAC_PI_6,
                amp: 0.05,
            },
            GridSpec::default(),
        )
        .unwrap();
        let field = fundamental_forms(&chart).unwrap();
        assert!(field.self_adjointness_residual() <= 1e-8);
    }

    #[test]
    fn graph_fixture_is_convex_and_nonumbilic() {
        let chart = SpacelikeChart::new(
            ChartKind::Graph {
                t0: std::f64::consts::FRAC_PI_6,
                amp: 0.05,
            },
            GridSpec::default(),
        )
        .unwrap();
        let field = fundamental_forms(&chart).unwrap();
        let mut max_anisotropy: f64 = 0.0;
        for f in field.forms.iter().flatten() {
            assert!(f.kappa.0 * f.kappa.1 > 0.0, "convexity violated");
            max_anisotropy = max_anisotropy.max((f.kappa.0 - f.kappa.1).abs());
        }
        assert!(
            max_anisotropy > 1e-3,
            "fixture should be non-umbilic, spread {max_anisotropy:.3e}"
        );
    }

    #[test]
    fn analytic_closure_matches_finite_differences_at_second_order() {
        // principal-curvature error against the closed form halves twice
        // per refinement
        let t = std::f64::consts::FRAC_PI_6;
        let mut grid = GridSpec {
            n_r: 17,
            n_theta: 24,
            ..GridSpec::default()
        };
        let mut errs = Vec::new();
        for _ in 0..3 {
            let chart = SpacelikeChart::equidistant(t, grid).unwrap();
            let fd = fundamental_forms(&chart).unwrap();
            let exact = analytic_forms(&chart).unwrap();
            let mut worst: f64 = 0.0;
            for ir in 0..grid.n_r {
                if !fd.in_report_region(ir) {
                    continue;
                }
                for it in 0..grid.n_theta {
                    let a = fd.at(ir, it).unwrap();
                    let b = exact.at(ir, it).unwrap();
                    worst = worst.max((a.kappa.0 - b.kappa.0).abs());
                    worst = worst.max((a.kappa.1 - b.kappa.1).abs());
                    for r in 0..2 {
                        for c in 0..2 {
                            worst = worst.max((a.i[r][c] - b.i[r][c]).abs() / b.i[0][0]);
                        }
                    }
                }
            }
            errs.push(worst);
            grid = grid.refined();
        }
        for pair in errs.windows(2) {
            let order = (pair[0] / pair[1]).log2();
            assert!(
                (order - 2.0).abs() <= 0.2,
                "analytic-vs-fd order {order:.3} ({errs:?})"
            );
        }
    }
}
