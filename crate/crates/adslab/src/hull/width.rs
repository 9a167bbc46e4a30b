//! Width of a quasicircle: the supremum of timelike distance between the
//! past and future boundary components of its convex hull.

use super::convex3::ConvexHull3;
use super::QuasiCircle;
use crate::ads::{pair22, Vec22};
use crate::Result;

// several interior candidates per face: slivers can have their barycenter
// outside the timelike-related region while the maximizer hides near a
// vertex
const CANDS: [[f64; 3]; 7] = [
    [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    [0.7, 0.15, 0.15],
    [0.15, 0.7, 0.15],
    [0.15, 0.15, 0.7],
    [0.1, 0.45, 0.45],
    [0.45, 0.1, 0.45],
    [0.45, 0.45, 0.1],
];

#[derive(Debug, Clone)]
pub struct WidthResult {
    pub width: f64,
    /// Achieving pair, in chart coordinates (past point, future point).
    pub pair: ([f64; 3], [f64; 3]),
    pub refined: bool,
    pub samples: usize,
}

fn chart_unit_vec(p: &[f64; 3]) -> Option<Vec22> {
    let v = Vec22::new(p[0], p[1], p[2], 1.0);
    let q = crate::ads::q22(&v);
    if q >= -1e-14 {
        return None;
    }
    Some(v.scale(1.0 / (-q).sqrt()))
}

/// Timelike distance between chart points, or None when undefined
/// (point outside AdS or the pair not timelike related).
fn chart_distance(p: &[f64; 3], q: &[f64; 3]) -> Option<f64> {
    let a = chart_unit_vec(p)?;
    let b = chart_unit_vec(q)?;
    let c = pair22(&a, &b).abs();
    if c > 1.0 {
        return None;
    }
    Some(c.clamp(0.0, 1.0).acos())
}

fn barycentric_point(hull: &ConvexHull3, face: usize, b: [f64; 3]) -> [f64; 3] {
    let [i, j, k] = hull.faces[face].idx;
    let (p, q, r) = (hull.points[i], hull.points[j], hull.points[k]);
    [
        b[0] * p[0] + b[1] * q[0] + b[2] * r[0],
        b[0] * p[1] + b[1] * q[1] + b[2] * r[1],
        b[0] * p[2] + b[1] * q[2] + b[2] * r[2],
    ]
}

fn thread_count() -> usize {
    if let Ok(v) = std::env::var("ADSLAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                return n.min(64);
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get().min(8))
        .unwrap_or(1)
}

/// Width search: a coarse pass over face barycenters, then projected
/// coordinate ascent on the barycentric coordinates of the best face pairs.
/// The coarse pass is chunked over a fixed number of slices so the result
/// does not depend on the thread count.
pub fn width(qc: &QuasiCircle, hull: &ConvexHull3, refine_steps: usize) -> Result<WidthResult> {
    if hull.degenerate {
        return Ok(WidthResult {
            width: 0.0,
            pair: (hull.interior, hull.interior),
            refined: false,
            samples: qc.chart_points.len(),
        });
    }
    let past: Vec<usize> = hull.past.clone();
    let future: Vec<usize> = hull.future.clone();
    let expand = |faces: &[usize]| -> (Vec<[f64; 3]>, Vec<usize>) {
        let mut pts = Vec::with_capacity(faces.len() * CANDS.len());
        let mut owner = Vec::with_capacity(faces.len() * CANDS.len());
        for (slot, &f) in faces.iter().enumerate() {
            for b in CANDS {
                pts.push(barycentric_point(hull, f, b));
                owner.push(slot);
            }
        }
        (pts, owner)
    };
    let (past_pts, past_owner) = expand(&past);
    let (future_pts, future_owner) = expand(&future);

    // coarse pass, deterministic chunking
    const CHUNKS: usize = 64;
    let chunk_len = past_pts.len().div_ceil(CHUNKS);
    let mut chunk_best: Vec<(f64, usize, usize)> = Vec::with_capacity(CHUNKS);
    let threads = thread_count();
    if threads <= 1 || past_pts.len() < 512 {
        for c in 0..CHUNKS {
            chunk_best.push(scan_chunk(c, chunk_len, &past_pts, &future_pts));
        }
    } else {
        let mut results = vec![(f64::NEG_INFINITY, usize::MAX, usize::MAX); CHUNKS];
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for (t, slot) in results.chunks_mut(CHUNKS.div_ceil(threads)).enumerate() {
                let past_pts = &past_pts;
                let future_pts = &future_pts;
                handles.push(scope.spawn(move || {
                    let base = t * slot.len();
                    for (off, out) in slot.iter_mut().enumerate() {
                        *out = scan_chunk(base + off, chunk_len, past_pts, future_pts);
                    }
                }));
            }
            for h in handles {
                h.join().expect("width worker panicked");
            }
        });
        chunk_best = results;
    }
    // deterministic reduction: best by (distance, indices)
    let mut ranked: Vec<(f64, usize, usize)> = chunk_best
        .into_iter()
        .filter(|r| r.0 > f64::NEG_INFINITY)
        .collect();
    ranked.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    // refine the best face pairs by compass ascent over barycentric
    // coordinates, de-duplicating candidate pairs that share faces
    let mut seen = std::collections::BTreeSet::new();
    let mut top: Vec<(usize, usize)> = Vec::new();
    for r in &ranked {
        let pair = (past_owner[r.1], future_owner[r.2]);
        if seen.insert(pair) {
            top.push(pair);
        }
        if top.len() >= 48 {
            break;
        }
    }
    let adj = FaceAdjacency::build(hull);
    let sp_of = |j: usize, faces: &[usize], owner: &[usize]| -> SurfacePoint {
        SurfacePoint {
            face: faces[owner[j]],
            bary: CANDS[j % CANDS.len()],
        }
    };
    let mut best = (
        ranked.first().map(|r| r.0).unwrap_or(0.0),
        ranked
            .first()
            .map(|r| (past_pts[r.1], future_pts[r.2]))
            .unwrap_or((hull.interior, hull.interior)),
    );
    for (pi, fi) in top {
        let (mut d, mut p, mut q) = ascend_from(
            hull,
            &adj,
            SurfacePoint::center(past[pi]),
            SurfacePoint::center(future[fi]),
            refine_steps,
        );
        // alternating best-response sweeps over the full candidate arrays
        // escape pair basins that the local ascent cannot leave
        for _ in 0..6 {
            let mut moved = false;
            if let Some((dp, pj)) = best_against(&q.position(hull), &past_pts) {
                if dp > d + 1e-12 {
                    let (nd, np, nq) =
                        ascend_from(hull, &adj, sp_of(pj, &past, &past_owner), q, refine_steps);
                    if nd > d {
                        d = nd;
                        p = np;
                        q = nq;
                        moved = true;
                    }
                }
            }
            if let Some((dq, fj)) = best_against(&p.position(hull), &future_pts) {
                if dq > d + 1e-12 {
                    let (nd, np, nq) =
                        ascend_from(hull, &adj, p, sp_of(fj, &future, &future_owner), refine_steps);
                    if nd > d {
                        d = nd;
                        p = np;
                        q = nq;
                        moved = true;
                    }
                }
            }
            if !moved {
                break;
            }
        }
        if d > best.0 {
            best = (d, (p.position(hull), q.position(hull)));
        }
    }

    Ok(WidthResult {
        width: best.0.max(0.0),
        pair: best.1,
        refined: refine_steps > 0,
        samples: qc.chart_points.len(),
    })
}

fn scan_chunk(
    chunk: usize,
    chunk_len: usize,
    past_pts: &[[f64; 3]],
    future_pts: &[[f64; 3]],
) -> (f64, usize, usize) {
    let lo = chunk * chunk_len;
    let hi = ((chunk + 1) * chunk_len).min(past_pts.len());
    let mut best = (f64::NEG_INFINITY, usize::MAX, usize::MAX);
    for i in lo..hi {
        for (j, q) in future_pts.iter().enumerate() {
            if let Some(d) = chart_distance(&past_pts[i], q) {
                if d > best.0 {
                    best = (d, i, j);
                }
            }
        }
    }
    best
}

// best candidate index on the other boundary component against a fixed
// chart point
fn best_against(fixed: &[f64; 3], candidates: &[[f64; 3]]) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (j, c) in candidates.iter().enumerate() {
        if let Some(d) = chart_distance(fixed, c) {
            if best.map_or(true, |(bd, _)| d > bd) {
                best = Some((d, j));
            }
        }
    }
    best
}

/// Face adjacency of the hull: shared edge -> the two incident faces.
pub(crate) struct FaceAdjacency {
    edges: std::collections::BTreeMap<(usize, usize), (usize, Option<usize>)>,
}

impl FaceAdjacency {
    fn build(hull: &ConvexHull3) -> FaceAdjacency {
        let mut edges = std::collections::BTreeMap::new();
        for (fi, f) in hull.faces.iter().enumerate() {
            let [a, b, c] = f.idx;
            for (u, v) in [(a, b), (b, c), (c, a)] {
                let key = (u.min(v), u.max(v));
                edges
                    .entry(key)
                    .and_modify(|e: &mut (usize, Option<usize>)| e.1 = Some(fi))
                    .or_insert((fi, None));
            }
        }
        FaceAdjacency { edges }
    }

    fn neighbor(&self, face: usize, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        match self.edges.get(&key) {
            Some(&(a, Some(b))) => {
                if a == face {
                    Some(b)
                } else if b == face {
                    Some(a)
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

// a movable point on the hull surface: a face plus barycentric coordinates;
// steps that push a coordinate negative hop across the shared edge into the
// adjacent face, so the ascent traverses the whole boundary component
#[derive(Clone, Copy)]
struct SurfacePoint {
    face: usize,
    bary: [f64; 3],
}

impl SurfacePoint {
    fn center(face: usize) -> SurfacePoint {
        SurfacePoint {
            face,
            bary: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        }
    }

    fn position(&self, hull: &ConvexHull3) -> [f64; 3] {
        barycentric_point(hull, self.face, self.bary)
    }

    // step along one barycentric axis, hopping to the adjacent face when
    // the step leaves the simplex
    fn stepped(
        &self,
        hull: &ConvexHull3,
        adj: &FaceAdjacency,
        axis: usize,
        delta: f64,
        allowed: &dyn Fn(usize) -> bool,
    ) -> SurfacePoint {
        let mut b = self.bary;
        b[axis] += delta;
        let deficit = -b[axis].min(0.0);
        if deficit <= 0.0 {
            let s = b[0] + b[1] + b[2];
            return SurfacePoint {
                face: self.face,
                bary: [b[0] / s, b[1] / s, b[2] / s],
            };
        }
        // clamp to the opposite edge, then hop if the neighbor qualifies
        b[axis] = 0.0;
        let s = b[0] + b[1] + b[2];
        let clamped = [b[0] / s, b[1] / s, b[2] / s];
        let [i0, i1, i2] = hull.faces[self.face].idx;
        let verts = [i0, i1, i2];
        let (u, v) = match axis {
            0 => (verts[1], verts[2]),
            1 => (verts[0], verts[2]),
            _ => (verts[0], verts[1]),
        };
        let Some(nf) = adj.neighbor(self.face, u, v) else {
            return SurfacePoint {
                face: self.face,
                bary: clamped,
            };
        };
        if !allowed(nf) {
            return SurfacePoint {
                face: self.face,
                bary: clamped,
            };
        }
        // re-express the edge point in the neighbor's barycentrics and push
        // slightly inward so the ascent can continue there
        let weight_u = match axis {
            0 => clamped[1],
            1 => clamped[0],
            _ => clamped[0],
        };
        let [n0, n1, n2] = hull.faces[nf].idx;
        let mut nb = [0.0f64; 3];
        for (slot, &vert) in [n0, n1, n2].iter().enumerate() {
            if vert == u {
                nb[slot] = weight_u;
            } else if vert == v {
                nb[slot] = 1.0 - weight_u;
            } else {
                nb[slot] = 0.0;
            }
        }
        // nudge off the edge
        for x in nb.iter_mut() {
            *x = x.max(0.02);
        }
        let s = nb[0] + nb[1] + nb[2];
        SurfacePoint {
            face: nf,
            bary: [nb[0] / s, nb[1] / s, nb[2] / s],
        }
    }
}

fn ascend_from(
    hull: &ConvexHull3,
    adj: &FaceAdjacency,
    p0: SurfacePoint,
    q0: SurfacePoint,
    steps: usize,
) -> (f64, SurfacePoint, SurfacePoint) {
    let past_set: std::collections::BTreeSet<usize> = hull.past.iter().copied().collect();
    let future_set: std::collections::BTreeSet<usize> = hull.future.iter().copied().collect();
    let in_past = |f: usize| past_set.contains(&f);
    let in_future = |f: usize| future_set.contains(&f);
    let eval = |p: &SurfacePoint, q: &SurfacePoint| -> f64 {
        chart_distance(&p.position(hull), &q.position(hull)).unwrap_or(f64::NEG_INFINITY)
    };
    let mut p = p0;
    let mut q = q0;
    let mut dbest = eval(&p, &q);
    let mut step = 0.35;
    for _ in 0..steps {
        let mut improved = false;
        for which in 0..2 {
            for axis in 0..3 {
                for sgn in [-1.0, 1.0] {
                    let (cand_p, cand_q) = if which == 0 {
                        (p.stepped(hull, adj, axis, sgn * step, &in_past), q)
                    } else {
                        (p, q.stepped(hull, adj, axis, sgn * step, &in_future))
                    };
                    let d = eval(&cand_p, &cand_q);
                    if d > dbest + 1e-15 {
                        dbest = d;
                        p = cand_p;
                        q = cand_q;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.6;
            if step < 1e-10 {
                break;
            }
        }
    }
    (dbest, p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::CircleMap;
    use crate::hull::QuasiCircle;

    #[test]
    fn identity_width_is_zero() {
        let qc = QuasiCircle::graph_curve(&CircleMap::identity(512), 512).unwrap();
        let hull = qc.convex_hull().unwrap();
        let w = width(&qc, &hull, 50).unwrap();
        assert!(w.width.abs() <= 1e-9, "width = {}", w.width);
    }

    #[test]
    fn mobius_width_is_zero() {
        let g = crate::circle::MobiusMap::new(crate::mat2::Mat2::new(1.6, 0.2, 0.4, 0.9)).unwrap();
        let f = CircleMap::from_mobius(&g, 512).unwrap();
        let qc = QuasiCircle::graph_curve(&f, 512).unwrap();
        let hull = qc.convex_hull().unwrap();
        let w = width(&qc, &hull, 50).unwrap();
        assert!(w.width.abs() <= 1e-9);
    }

    #[test]
    fn rhombus_width_is_half_pi() {
        let qc = QuasiCircle::rhombus(2048).unwrap();
        let hull = qc.convex_hull().unwrap();
        let w = width(&qc, &hull, 80).unwrap();
        assert!(
            (w.width - std::f64::consts::FRAC_PI_2).abs() <= 1e-3,
            "rhombus width = {:.6}",
            w.width
        );
    }

    #[test]
    fn width_monotone_in_distortion() {
        let mut prev = -1.0;
        for s in [2.0, 8.0, 32.0] {
            let f = CircleMap::piecewise_scale(s, 512).unwrap();
            let qc = QuasiCircle::graph_curve(&f, 512).unwrap();
            let hull = qc.convex_hull().unwrap();
            let w = width(&qc, &hull, 50).unwrap();
            assert!(
                w.width > prev,
                "width not increasing at s = {s}: {} <= {prev}",
                w.width
            );
            assert!(w.width < std::f64::consts::FRAC_PI_2 - 1e-3);
            prev = w.width;
        }
    }

    #[test]
    fn width_refinement_stability() {
        let f = CircleMap::piecewise_scale(4.0, 1024).unwrap();
        let w1 = {
            let qc = QuasiCircle::graph_curve(&f, 1024).unwrap();
            let hull = qc.convex_hull().unwrap();
            width(&qc, &hull, 60).unwrap().width
        };
        let w2 = {
            let qc = QuasiCircle::graph_curve(&f, 2048).unwrap();
            let hull = qc.convex_hull().unwrap();
            width(&qc, &hull, 60).unwrap().width
        };
        assert!((w1 - w2).abs() <= 2e-3, "w(1024) = {w1}, w(2048) = {w2}");
    }
}
