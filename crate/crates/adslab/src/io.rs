//! File formats: circle-map CSV, matrix JSON arrays, OFF meshes with JSON
//! sidecars, and solved-field CSV exports.

use crate::ads::Isometry;
use crate::circle::{CircleMap, MobiusMap};
use crate::error::AdsError;
use crate::hull::{ConvexHull3, WidthResult};
use crate::mat2::Mat2;
use crate::solver::ConformalFactor;
use crate::Result;

/// Parse the circle-map CSV format: header `theta,f_theta`, radians,
/// strictly increasing, one period (the wrap row at +2pi is implied).
pub fn read_circle_map_csv(text: &str) -> Result<CircleMap> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| AdsError::InvalidInput("empty circle-map file".into()))?;
    if header.1.trim() != "theta,f_theta" {
        return Err(AdsError::InvalidInput(format!(
            "line 1: expected header 'theta,f_theta', got {:?}",
            header.1.trim()
        )));
    }
    let mut thetas = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let theta = parts
            .next()
            .and_then(|t| t.trim().parse::<f64>().ok())
            .ok_or_else(|| {
                AdsError::InvalidInput(format!("line {}: malformed theta", idx + 1))
            })?;
        let value = parts
            .next()
            .and_then(|t| t.trim().parse::<f64>().ok())
            .ok_or_else(|| {
                AdsError::InvalidInput(format!("line {}: malformed f_theta", idx + 1))
            })?;
        if parts.next().is_some() {
            return Err(AdsError::InvalidInput(format!(
                "line {}: expected two columns",
                idx + 1
            )));
        }
        thetas.push(theta);
        values.push(value);
    }
    CircleMap::from_samples(thetas, values)
        .map_err(|e| AdsError::InvalidInput(format!("circle-map samples: {e}")))
}

pub fn write_circle_map_csv(map: &CircleMap) -> String {
    let mut out = String::from("theta,f_theta\n");
    for (t, v) in map.samples() {
        out.push_str(&format!("{t:.17e},{v:.17e}\n"));
    }
    out
}

/// Mobius map as a JSON 4-array, row-major.
pub fn mobius_to_json(g: &MobiusMap) -> serde_json::Value {
    serde_json::json!([g.m.a, g.m.b, g.m.c, g.m.d])
}

pub fn mobius_from_json(v: &serde_json::Value) -> Result<MobiusMap> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 4)
        .ok_or_else(|| AdsError::InvalidInput("Mobius map must be a 4-array".into()))?;
    let f = |i: usize| -> Result<f64> {
        arr[i]
            .as_f64()
            .ok_or_else(|| AdsError::InvalidInput("non-numeric matrix entry".into()))
    };
    MobiusMap::new(Mat2::new(f(0)?, f(1)?, f(2)?, f(3)?))
}

/// Isometry as {"A": [...], "B": [...]}, row-major 4-arrays.
pub fn isometry_to_json(g: &Isometry) -> serde_json::Value {
    serde_json::json!({
        "A": [g.a.a, g.a.b, g.a.c, g.a.d],
        "B": [g.b.a, g.b.b, g.b.c, g.b.d],
    })
}

pub fn isometry_from_json(v: &serde_json::Value) -> Result<Isometry> {
    let read = |key: &str| -> Result<Mat2> {
        let arr = v
            .get(key)
            .and_then(|a| a.as_array())
            .filter(|a| a.len() == 4)
            .ok_or_else(|| {
                AdsError::InvalidInput(format!("isometry field {key:?} must be a 4-array"))
            })?;
        let f = |i: usize| -> Result<f64> {
            arr[i]
                .as_f64()
                .ok_or_else(|| AdsError::InvalidInput("non-numeric matrix entry".into()))
        };
        Ok(Mat2::new(f(0)?, f(1)?, f(2)?, f(3)?))
    };
    Isometry::new(read("A")?, read("B")?)
}

/// OFF-format text mesh of a hull (vertices and triangular faces).
pub fn hull_to_off(hull: &ConvexHull3) -> String {
    let mut out = String::from("OFF\n");
    out.push_str(&format!("{} {} 0\n", hull.points.len(), hull.faces.len()));
    for p in &hull.points {
        out.push_str(&format!("{:.17e} {:.17e} {:.17e}\n", p[0], p[1], p[2]));
    }
    for f in &hull.faces {
        out.push_str(&format!("3 {} {} {}\n", f.idx[0], f.idx[1], f.idx[2]));
    }
    out
}

/// JSON sidecar for plotting: face classification, width, achieving pair.
pub fn hull_sidecar(hull: &ConvexHull3, width: &WidthResult) -> serde_json::Value {
    serde_json::json!({
        "future_faces": hull.future,
        "past_faces": hull.past,
        "degenerate": hull.degenerate,
        "width": width.width,
        "pair": [width.pair.0, width.pair.1],
    })
}

/// Solved conformal factor as CSV rows (x, y, u).
pub fn conformal_factor_csv(sol: &ConformalFactor) -> String {
    let mut out = String::from("x,y,u\n");
    for (k, node) in sol.grid.nodes.iter().enumerate() {
        out.push_str(&format!(
            "{:.17e},{:.17e},{:.17e}\n",
            node.xy.0, node.xy.1, sol.u[k]
        ));
    }
    out
}

/// Metadata sidecar for a solve.
pub fn conformal_factor_meta(sol: &ConformalFactor) -> serde_json::Value {
    serde_json::json!({
        "residual": sol.residual,
        "grid": sol.grid.n,
        "r_max": sol.grid.r_max,
        "newton_iterations": sol.newton_iterations,
        "boundary": sol.boundary,
    })
}

/// Residual report rows as CSV (node, quantity, value).
pub fn residual_csv(rows: &[(usize, &str, f64)]) -> String {
    let mut out = String::from("node,quantity,value\n");
    for (node, what, value) in rows {
        out.push_str(&format!("{node},{what},{value:.17e}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_map_round_trip() {
        // samples survive the text format exactly; the parsed map has no
        // exact form, so compare the sampled interpolants
        let mut f = CircleMap::piecewise_scale(2.0, 512).unwrap();
        f.exact = None;
        let text = write_circle_map_csv(&f);
        let back = read_circle_map_csv(&text).unwrap();
        for ((t0, v0), (t1, v1)) in f.samples().zip(back.samples()) {
            assert_eq!(t0, t1);
            assert_eq!(v0, v1);
        }
        assert!(f.sup_distance(&back, 256) <= 1e-14);
    }

    #[test]
    fn malformed_csv_is_line_diagnosed() {
        let err = read_circle_map_csv("theta,f_theta\n0.0,0.0\nnot-a-number,1.0\n")
            .unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert_eq!(err.exit_code(), 2);
        let err = read_circle_map_csv("wrong,header\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn mobius_json_round_trip() {
        let g = MobiusMap::new(Mat2::new(1.5, 0.25, 0.5, 1.0)).unwrap();
        let back = mobius_from_json(&mobius_to_json(&g)).unwrap();
        assert!(g.max_abs_diff(&back) <= 1e-15);
    }

    #[test]
    fn off_export_shape() {
        let qc = crate::hull::QuasiCircle::rhombus(64).unwrap();
        let hull = qc.convex_hull().unwrap();
        let off = hull_to_off(&hull);
        let mut lines = off.lines();
        assert_eq!(lines.next(), Some("OFF"));
        let counts = lines.next().unwrap();
        assert!(counts.starts_with(&format!("{} 4", hull.points.len())));
    }
}
