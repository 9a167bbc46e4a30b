//! Spacelike convex surfaces: charts over the Poincare disc, fundamental
//! forms, left/right hyperbolic projections, boundary extensions, and
//! gluing maps.
//!
//! Charts are parametrized over a polar grid of the unit disc. The disc
//! coordinate `w` corresponds to the upper half-plane point
//! `z = i (1 + w) / (1 - w)`, and the half-plane point `z` corresponds to
//! the order-two rotation matrix `R_z = [[u, -(u^2+v^2)], [1, -u]] / v`
//! (`z = u + iv`), which is the totally geodesic spacelike plane carrying
//! the diagonal ideal boundary. The equidistant surface at signed timelike
//! distance `t` from that plane is `cos(t) R_z + sin(t) Id`.

mod forms;
mod gluing;
mod projection;

pub use forms::{analytic_forms, fundamental_forms, FormsField, NodeForms};
pub use gluing::{
    gluing_map, principal_curvature_bounds, projection_qi_report, GHConvexSubset, GluingMap,
};
pub use projection::{
    boundary_extension, left_right_projection, pullback_check, BoundaryExtension, PullbackReport,
};

use crate::ads::{from_matrix, AdsPoint, BoundaryPoint, Isometry, Vec22};
use crate::error::AdsError;
use crate::mat2::Mat2;
use crate::Result;

/// Half-plane point of a disc coordinate.
pub fn disc_to_halfplane(w: (f64, f64)) -> (f64, f64) {
    // z = i (1 + w) / (1 - w)
    let (wr, wi) = w;
    let nr = -wi; // i(1+w) = -wi + i(1 + wr)
    let ni = 1.0 + wr;
    let dr = 1.0 - wr;
    let di = -wi;
    let den = dr * dr + di * di;
    ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den)
}

/// Disc point of a half-plane coordinate.
pub fn halfplane_to_disc(z: (f64, f64)) -> (f64, f64) {
    // w = (z - i) / (z + i)
    let (x, y) = z;
    let nr = x;
    let ni = y - 1.0;
    let dr = x;
    let di = y + 1.0;
    let den = dr * dr + di * di;
    ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den)
}

/// Hyperbolic distance between disc points.
pub fn disc_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let da = 1.0 - a.0 * a.0 - a.1 * a.1;
    let db = 1.0 - b.0 * b.0 - b.1 * b.1;
    let d2 = (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
    (1.0 + 2.0 * d2 / (da * db)).acosh()
}

/// The order-two rotation about the half-plane point z, as a unimodular
/// matrix; these matrices sweep the totally geodesic plane x3 = 0.
pub fn rotation_about(z: (f64, f64)) -> Mat2 {
    let (u, v) = z;
    Mat2::new(u / v, -(u * u + v * v) / v, 1.0 / v, -u / v)
}

/// How a chart's points are produced.
#[derive(Debug, Clone)]
pub enum ChartKind {
    /// Equidistant surface at signed timelike distance t from the
    /// diagonal-boundary plane; umbilic with principal curvature tan t and
    /// induced curvature -1/cos^2 t.
    Equidistant { t: f64 },
    /// Normal-flow graph: time offset t0 + amp * exp(-d_hyp(0, w)^2),
    /// a convex non-umbilic fixture with the same diagonal ideal boundary.
    Graph { t0: f64, amp: f64 },
    /// Normal-flow graph with the time offset given by a closed-form
    /// height expression in (x, y, d); the expression must take values in
    /// (-pi/2, pi/2) and settle to a constant at infinity, which keeps the
    /// ideal boundary diagonal.
    GraphExpr { height: std::sync::Arc<crate::expr::Expr> },
    /// Isometric image of another chart.
    IsometryImage {
        base: Box<ChartKind>,
        iso: Isometry,
    },
}

impl ChartKind {
    /// Ambient position over a disc coordinate.
    pub fn position(&self, w: (f64, f64)) -> Vec22 {
        match self {
            ChartKind::Equidistant { t } => {
                let z = disc_to_halfplane(w);
                let m = rotation_about(z).scale(t.cos()) + Mat2::identity().scale(t.sin());
                from_matrix(&m)
            }
            ChartKind::Graph { t0, amp } => {
                let z = disc_to_halfplane(w);
                let d = disc_distance((0.0, 0.0), w);
                let t = t0 + amp * (-d * d).exp();
                let m = rotation_about(z).scale(t.cos()) + Mat2::identity().scale(t.sin());
                from_matrix(&m)
            }
            ChartKind::GraphExpr { height } => {
                let z = disc_to_halfplane(w);
                let d = disc_distance((0.0, 0.0), w);
                let t = height.eval(w.0, w.1, d);
                let m = rotation_about(z).scale(t.cos()) + Mat2::identity().scale(t.sin());
                from_matrix(&m)
            }
            ChartKind::IsometryImage { base, iso } => iso.act_vec(&base.position(w)),
        }
    }

    /// Exact ideal boundary point of the ray at disc angle phi.
    pub fn ideal_point(&self, phi: f64) -> BoundaryPoint {
        match self {
            ChartKind::Equidistant { .. }
            | ChartKind::Graph { .. }
            | ChartKind::GraphExpr { .. } => BoundaryPoint::from_angles(phi, phi),
            ChartKind::IsometryImage { base, iso } => iso.act_boundary(&base.ideal_point(phi)),
        }
    }

    pub fn isometry_image(self, iso: Isometry) -> ChartKind {
        ChartKind::IsometryImage {
            base: Box::new(self),
            iso,
        }
    }

    /// Chart fixture from JSON:
    /// `{"kind": "equidistant", "t": ...}`,
    /// `{"kind": "graph", "height_expr": "..."}`, or
    /// `{"kind": "isometry_image", "base": {...}, "g": {"A": [...], "B": [...]}}`.
    pub fn from_json(v: &serde_json::Value) -> Result<ChartKind> {
        let kind = v
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| AdsError::InvalidInput("chart fixture needs a 'kind'".into()))?;
        match kind {
            "equidistant" => {
                let t = v.get("t").and_then(|t| t.as_f64()).ok_or_else(|| {
                    AdsError::InvalidInput("equidistant fixture needs numeric 't'".into())
                })?;
                if t.abs() >= std::f64::consts::FRAC_PI_2 - 1e-6 {
                    return Err(AdsError::DegenerateDistance { t: t.abs() });
                }
                Ok(ChartKind::Equidistant { t })
            }
            "graph" => {
                let expr_text = v.get("height_expr").and_then(|e| e.as_str()).ok_or_else(|| {
                    AdsError::InvalidInput("graph fixture needs a 'height_expr' string".into())
                })?;
                let expr = crate::expr::Expr::parse(expr_text)?;
                Ok(ChartKind::GraphExpr {
                    height: std::sync::Arc::new(expr),
                })
            }
            "isometry_image" => {
                let base = v.get("base").ok_or_else(|| {
                    AdsError::InvalidInput("isometry_image fixture needs a 'base'".into())
                })?;
                let g = v.get("g").ok_or_else(|| {
                    AdsError::InvalidInput("isometry_image fixture needs 'g'".into())
                })?;
                Ok(ChartKind::from_json(base)?.isometry_image(crate::io::isometry_from_json(g)?))
            }
            other => Err(AdsError::InvalidInput(format!(
                "unknown chart fixture kind {other:?}"
            ))),
        }
    }
}

/// Polar grid resolution for a chart.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_min: f64,
    pub r_max: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_r: 48,
            n_theta: 64,
            r_min: 0.05,
            r_max: 0.55,
        }
    }
}

impl GridSpec {
    /// Halve both grid spacings, keeping the radial endpoints.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            n_r: 2 * (self.n_r - 1) + 1,
            n_theta: 2 * self.n_theta,
            ..*self
        }
    }

    pub fn h_r(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_r - 1) as f64
    }

    pub fn h_theta(&self) -> f64 {
        std::f64::consts::TAU / self.n_theta as f64
    }
}

/// A parametrized spacelike surface sampled on a polar disc grid.
#[derive(Debug, Clone)]
pub struct SpacelikeChart {
    pub kind: ChartKind,
    pub grid: GridSpec,
    /// Node positions, indexed ir * n_theta + it.
    pub points: Vec<Vec22>,
}

impl SpacelikeChart {
    pub fn new(kind: ChartKind, grid: GridSpec) -> Result<SpacelikeChart> {
        if grid.n_r < 8 || grid.n_theta < 16 {
            return Err(AdsError::InvalidInput("grid too coarse".into()));
        }
        let mut points = Vec::with_capacity(grid.n_r * grid.n_theta);
        for ir in 0..grid.n_r {
            let r = grid.r_min + ir as f64 * grid.h_r();
            for it in 0..grid.n_theta {
                let phi = it as f64 * grid.h_theta();
                let p = kind.position((r * phi.cos(), r * phi.sin()));
                if !p.is_finite() {
                    return Err(AdsError::InvalidInput(
                        "chart position is not finite".into(),
                    ));
                }
                points.push(p);
            }
        }
        Ok(SpacelikeChart { kind, grid, points })
    }

    /// Equidistant surface fixture; |t| must stay below pi/2.
    pub fn equidistant(t: f64, grid: GridSpec) -> Result<SpacelikeChart> {
        if t.abs() >= std::f64::consts::FRAC_PI_2 - 1e-6 {
            return Err(AdsError::DegenerateDistance { t: t.abs() });
        }
        SpacelikeChart::new(ChartKind::Equidistant { t }, grid)
    }

    pub fn idx(&self, ir: usize, it: usize) -> usize {
        ir * self.grid.n_theta + it % self.grid.n_theta
    }

    pub fn node_disc(&self, ir: usize, it: usize) -> (f64, f64) {
        let r = self.grid.r_min + ir as f64 * self.grid.h_r();
        let phi = (it % self.grid.n_theta) as f64 * self.grid.h_theta();
        (r * phi.cos(), r * phi.sin())
    }

    pub fn point(&self, ir: usize, it: usize) -> &Vec22 {
        &self.points[self.idx(ir, it)]
    }

    pub fn ads_point(&self, ir: usize, it: usize) -> Result<AdsPoint> {
        AdsPoint::new(*self.point(ir, it))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ads::q22;

    #[test]
    fn equidistant_chart_is_on_quadric() {
        let chart =
            SpacelikeChart::equidistant(std::f64::consts::FRAC_PI_6, GridSpec::default()).unwrap();
        for p in &chart.points {
            assert!((q22(p) + 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_distance_chart_lies_in_traceless_plane() {
        let chart = SpacelikeChart::equidistant(0.0, GridSpec::default()).unwrap();
        for p in &chart.points {
            assert!(p.x3.abs() <= 1e-14);
        }
    }

    #[test]
    fn degenerate_distance_rejected() {
        assert!(matches!(
            SpacelikeChart::equidistant(std::f64::consts::FRAC_PI_2, GridSpec::default()),
            Err(AdsError::DegenerateDistance { .. })
        ));
    }

    #[test]
    fn normal_flow_lines_are_shared() {
        // equidistant charts at the same disc coordinate sit on a common
        // timelike geodesic, at parameter distance t2 - t1
        let t1 = 0.3;
        let t2 = 0.55;
        let c1 = SpacelikeChart::equidistant(t1, GridSpec::default()).unwrap();
        let c2 = SpacelikeChart::equidistant(t2, GridSpec::default()).unwrap();
        for (ir, it) in [(3usize, 5usize), (10, 40), (30, 63)] {
            let d = crate::ads::timelike_distance(
                &c1.ads_point(ir, it).unwrap(),
                &c2.ads_point(ir, it).unwrap(),
            )
            .unwrap();
            assert!((d - (t2 - t1)).abs() <= 1e-10, "normal flow distance {d}");
        }
    }

    #[test]
    fn ideal_boundary_of_equidistant_is_diagonal() {
        let chart = SpacelikeChart::equidistant(0.4, GridSpec::default()).unwrap();
        for it in [0usize, 7, 23] {
            let phi = it as f64 * chart.grid.h_theta();
            let ideal = chart.kind.ideal_point(phi);
            assert!(ideal.left.chordal_dist(&ideal.right) <= 1e-14);
            // numerical radial limit of chart directions approaches the lift
            let w = (0.99999 * phi.cos(), 0.99999 * phi.sin());
            let p = chart.kind.position(w);
            let dir = p.scale(1.0 / p.norm());
            let lift = ideal.null_rep();
            let dot = dir.x1 * lift.x1 + dir.x2 * lift.x2 + dir.x3 * lift.x3 + dir.x4 * lift.x4;
            assert!(dot.abs() > 1.0 - 1e-4, "radial direction not aligned: {dot}");
        }
    }
}
