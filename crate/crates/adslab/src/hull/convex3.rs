//! Incremental 3D convex hull with deterministic insertion order.
//!
//! Beneath-beyond with a full horizon rebuild per insertion: O(n F), ample
//! for the curve sizes used here (up to a few thousand samples). Coplanar
//! input must be detected by the caller; this builder requires a genuine
//! initial tetrahedron.

use crate::error::AdsError;
use crate::Result;

type P3 = [f64; 3];

fn sub(a: &P3, b: &P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &P3, b: &P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: &P3, b: &P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &P3) -> f64 {
    dot(a, a).sqrt()
}

/// A triangular hull face with its outward unit normal and plane offset
/// (so that dot(normal, x) <= offset for hull points).
#[derive(Debug, Clone)]
pub struct HullFace {
    pub idx: [usize; 3],
    pub normal: P3,
    pub offset: f64,
}

impl HullFace {
    pub fn signed_dist(&self, p: &P3) -> f64 {
        dot(&self.normal, p) - self.offset
    }
}

#[derive(Debug, Clone)]
pub struct ConvexHull3 {
    pub points: Vec<P3>,
    pub faces: Vec<HullFace>,
    /// Indices into `faces` with outward normal pointing up the chart time
    /// axis (future boundary) and down (past boundary).
    pub future: Vec<usize>,
    pub past: Vec<usize>,
    pub degenerate: bool,
    /// Interior reference point used to orient normals.
    pub interior: P3,
}

/// Best-fit plane residual of a point cloud (max distance to the centroid
/// plane of smallest spread); used to flag degenerate (planar) hulls.
pub fn planarity_residual(points: &[P3]) -> f64 {
    let n = points.len() as f64;
    let mut c = [0.0; 3];
    for p in points {
        for k in 0..3 {
            c[k] += p[k] / n;
        }
    }
    // covariance matrix
    let mut m = [[0.0f64; 3]; 3];
    for p in points {
        let d = sub(p, &c);
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += d[i] * d[j];
            }
        }
    }
    // smallest eigenvector by inverse-power-free approach: try the three
    // coordinate cross products of the two dominant directions; robust
    // enough at our scales: use Jacobi-free closed form via eigen of 3x3.
    let eig = smallest_eigenvector_sym3(&m);
    let mut worst: f64 = 0.0;
    for p in points {
        worst = worst.max(dot(&sub(p, &c), &eig).abs());
    }
    worst
}

// smallest eigenvector of a symmetric 3x3 matrix via explicit eigenvalues
fn smallest_eigenvector_sym3(m: &[[f64; 3]; 3]) -> P3 {
    // eigenvalues by the trigonometric closed form
    let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let eig_min = if p < 1e-300 {
        q
    } else {
        let mut b = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i][j] = (m[i][j] - if i == j { q } else { 0.0 }) / p;
            }
        }
        let detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
            - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        let r = (detb / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        // smallest eigenvalue
        q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos()
    };
    // nullspace of (m - eig_min I) via the largest cross product of rows
    let rows = [
        [m[0][0] - eig_min, m[0][1], m[0][2]],
        [m[1][0], m[1][1] - eig_min, m[1][2]],
        [m[2][0], m[2][1], m[2][2] - eig_min],
    ];
    let c01 = cross(&rows[0], &rows[1]);
    let c02 = cross(&rows[0], &rows[2]);
    let c12 = cross(&rows[1], &rows[2]);
    let best = [c01, c02, c12]
        .into_iter()
        .max_by(|a, b| norm(a).partial_cmp(&norm(b)).unwrap())
        .unwrap();
    let n = norm(&best);
    if n < 1e-300 {
        [0.0, 0.0, 1.0]
    } else {
        [best[0] / n, best[1] / n, best[2] / n]
    }
}

impl ConvexHull3 {
    /// Incremental hull of `points` in deterministic input order.
    /// Faces are split by the sign of the chart-time component (index 2) of
    /// the outward normal: future when positive, past when negative.
    pub fn build(points: Vec<P3>) -> Result<ConvexHull3> {
        let n = points.len();
        if n < 4 {
            return Err(AdsError::DegenerateInput);
        }
        let scale = points
            .iter()
            .map(|p| p[0].abs().max(p[1].abs()).max(p[2].abs()))
            .fold(0.0f64, f64::max)
            .max(1e-30);
        let eps = 1e-12 * scale;

        // initial tetrahedron from extreme points
        let i0 = (0..n)
            .min_by(|&a, &b| points[a].partial_cmp(&points[b]).unwrap())
            .unwrap();
        let i1 = (0..n)
            .max_by(|&a, &b| {
                norm(&sub(&points[a], &points[i0]))
                    .partial_cmp(&norm(&sub(&points[b], &points[i0])))
                    .unwrap()
            })
            .unwrap();
        let d01 = sub(&points[i1], &points[i0]);
        let i2 = (0..n)
            .max_by(|&a, &b| {
                let da = norm(&cross(&d01, &sub(&points[a], &points[i0])));
                let db = norm(&cross(&d01, &sub(&points[b], &points[i0])));
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        let nrm = cross(&d01, &sub(&points[i2], &points[i0]));
        let i3 = (0..n)
            .max_by(|&a, &b| {
                let da = dot(&nrm, &sub(&points[a], &points[i0])).abs();
                let db = dot(&nrm, &sub(&points[b], &points[i0])).abs();
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        if dot(&nrm, &sub(&points[i3], &points[i0])).abs() <= 10.0 * eps {
            return Err(AdsError::DegenerateInput);
        }

        let interior = {
            let mut c = [0.0; 3];
            for &i in &[i0, i1, i2, i3] {
                for k in 0..3 {
                    c[k] += points[i][k] / 4.0;
                }
            }
            c
        };

        let mk_face = |a: usize, b: usize, c: usize| -> HullFace {
            let mut nn = cross(&sub(&points[b], &points[a]), &sub(&points[c], &points[a]));
            let ln = norm(&nn);
            nn = [nn[0] / ln, nn[1] / ln, nn[2] / ln];
            let mut off = dot(&nn, &points[a]);
            // orient outward relative to the interior point
            if dot(&nn, &interior) > off {
                nn = [-nn[0], -nn[1], -nn[2]];
                off = -off;
            }
            HullFace {
                idx: [a, b, c],
                normal: nn,
                offset: off,
            }
        };

        let mut faces: Vec<HullFace> = vec![
            mk_face(i0, i1, i2),
            mk_face(i0, i1, i3),
            mk_face(i0, i2, i3),
            mk_face(i1, i2, i3),
        ];

        let seed = [i0, i1, i2, i3];
        for p_idx in 0..n {
            if seed.contains(&p_idx) {
                continue;
            }
            let p = points[p_idx];
            let visible: Vec<usize> = (0..faces.len())
                .filter(|&f| faces[f].signed_dist(&p) > eps)
                .collect();
            if visible.is_empty() {
                continue;
            }
            // horizon: edges of visible faces not shared with another visible face
            use std::collections::BTreeMap;
            let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for &f in &visible {
                let [a, b, c] = faces[f].idx;
                for (u, v) in [(a, b), (b, c), (c, a)] {
                    let key = (u.min(v), u.max(v));
                    *edges.entry(key).or_insert(0) += 1;
                }
            }
            let horizon: Vec<(usize, usize)> = edges
                .iter()
                .filter(|(_, &cnt)| cnt == 1)
                .map(|(&(u, v), _)| (u, v))
                .collect();
            // drop visible faces (descending order keeps indices valid)
            let mut vis_sorted = visible.clone();
            vis_sorted.sort_unstable_by(|a, b| b.cmp(a));
            for f in vis_sorted {
                faces.swap_remove(f);
            }
            for (u, v) in horizon {
                faces.push(mk_face(u, v, p_idx));
            }
        }

        // split faces by the chart-time component of the outward normal
        let mut future = Vec::new();
        let mut past = Vec::new();
        for (k, f) in faces.iter().enumerate() {
            if f.normal[2] > 1e-9 {
                future.push(k);
            } else if f.normal[2] < -1e-9 {
                past.push(k);
            }
        }

        Ok(ConvexHull3 {
            points,
            faces,
            future,
            past,
            degenerate: false,
            interior,
        })
    }

    /// Degenerate (planar) hull: no faces, flag set.
    pub fn degenerate(points: Vec<P3>) -> ConvexHull3 {
        let mut interior = [0.0; 3];
        let n = points.len() as f64;
        for p in &points {
            for k in 0..3 {
                interior[k] += p[k] / n;
            }
        }
        ConvexHull3 {
            points,
            faces: Vec::new(),
            future: Vec::new(),
            past: Vec::new(),
            degenerate: true,
            interior,
        }
    }

    /// Independent convexity audit: max signed distance of any input point
    /// over any face plane (positive values would violate convexity).
    pub fn convexity_residual(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for f in &self.faces {
            for p in &self.points {
                worst = worst.max(f.signed_dist(p));
            }
        }
        if worst == f64::NEG_INFINITY {
            0.0
        } else {
            worst
        }
    }

    /// Vertex indices that appear in at least one face.
    pub fn hull_vertex_indices(&self) -> Vec<usize> {
        let mut seen = vec![false; self.points.len()];
        for f in &self.faces {
            for &i in &f.idx {
                seen[i] = true;
            }
        }
        (0..self.points.len()).filter(|&i| seen[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_hull() {
        let mut pts = Vec::new();
        for &x in &[-1.0, 1.0] {
            for &y in &[-1.0, 1.0] {
                for &z in &[-1.0, 1.0] {
                    pts.push([x, y, z]);
                }
            }
        }
        // interior points must be absorbed
        pts.push([0.0, 0.0, 0.0]);
        pts.push([0.2, -0.1, 0.3]);
        let hull = ConvexHull3::build(pts).unwrap();
        assert_eq!(hull.hull_vertex_indices().len(), 8);
        assert!(hull.convexity_residual() <= 1e-12);
        // cube: 6 quads = 12 triangles
        assert_eq!(hull.faces.len(), 12);
        assert_eq!(hull.future.len(), 2);
        assert_eq!(hull.past.len(), 2);
    }

    #[test]
    fn tetrahedron_face_split() {
        // the lightlike-quadrilateral vertex set
        let s = 2f64.sqrt();
        let pts = vec![[s, 0.0, -1.0], [0.0, s, 1.0], [-s, 0.0, -1.0], [0.0, -s, 1.0]];
        let hull = ConvexHull3::build(pts).unwrap();
        assert_eq!(hull.faces.len(), 4);
        assert_eq!(hull.future.len(), 2);
        assert_eq!(hull.past.len(), 2);
        assert!(hull.convexity_residual() <= 1e-12);
    }

    #[test]
    fn planarity_detection() {
        let pts: Vec<[f64; 3]> = (0..100)
            .map(|i| {
                let t = i as f64 * 0.1;
                [t.cos(), t.sin(), 0.5 * t.cos() + 0.25 * t.sin()]
            })
            .collect();
        assert!(planarity_residual(&pts) <= 1e-12);
        let mut bent = pts.clone();
        bent[50][2] += 0.1;
        assert!(planarity_residual(&bent) > 1e-3);
    }

    #[test]
    fn degenerate_input_rejected() {
        let pts = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]];
        assert!(matches!(
            ConvexHull3::build(pts),
            Err(AdsError::DegenerateInput)
        ));
    }
}
