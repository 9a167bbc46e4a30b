//! Uniform Cartesian grid on a Euclidean disc with Shortley-Weller
//! treatment of the irregular boundary.

use crate::error::AdsError;
use crate::Result;

/// One axis direction of the 5-point stencil.
#[derive(Debug, Clone, Copy)]
pub enum Neighbor {
    /// Interior neighbor at full spacing.
    Interior(usize),
    /// The stencil leg crosses the boundary circle after `frac * h`
    /// (0 < frac <= 1); the Dirichlet value applies at the crossing point.
    Boundary { frac: f64, point: (f64, f64) },
}

/// Interior node of the disc grid.
#[derive(Debug, Clone)]
pub struct Node {
    pub xy: (f64, f64),
    pub east: Neighbor,
    pub west: Neighbor,
    pub north: Neighbor,
    pub south: Neighbor,
}

#[derive(Debug, Clone)]
pub struct SolveGrid {
    /// Points per side of the bounding square.
    pub n: usize,
    pub h: f64,
    pub r_max: f64,
    pub nodes: Vec<Node>,
    /// (i, j) -> interior index.
    index: Vec<Option<usize>>,
}

impl SolveGrid {
    pub fn new(n: usize, r_max: f64) -> Result<SolveGrid> {
        if n < 17 {
            return Err(AdsError::InvalidInput("grid needs at least 17 points".into()));
        }
        if !(0.0..1.0).contains(&r_max) {
            return Err(AdsError::InvalidInput(
                "solve radius must lie inside the unit disc".into(),
            ));
        }
        let h = 2.0 * r_max / (n - 1) as f64;
        let coord = |i: usize| -> f64 { -r_max + i as f64 * h };
        let inside = |x: f64, y: f64| -> bool { x * x + y * y < r_max * r_max - 1e-14 };

        let mut index = vec![None; n * n];
        let mut count = 0usize;
        for j in 0..n {
            for i in 0..n {
                if inside(coord(i), coord(j)) {
                    index[j * n + i] = Some(count);
                    count += 1;
                }
            }
        }

        // crossing fraction along an axis leg leaving the disc
        let crossing = |x0: f64, y0: f64, dx: f64, dy: f64| -> (f64, (f64, f64)) {
            // solve |(x0 + s dx, y0 + s dy)| = r_max for s in (0, 1]
            let a = dx * dx + dy * dy;
            let b = 2.0 * (x0 * dx + y0 * dy);
            let c = x0 * x0 + y0 * y0 - r_max * r_max;
            let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
            let s = (-b + disc) / (2.0 * a);
            let s = s.clamp(1e-6, 1.0);
            (s, (x0 + s * dx, y0 + s * dy))
        };

        let mut nodes = Vec::with_capacity(count);
        for j in 0..n {
            for i in 0..n {
                if index[j * n + i].is_none() {
                    continue;
                }
                let (x, y) = (coord(i), coord(j));
                let neighbor = |di: isize, dj: isize| -> Neighbor {
                    let ni = i as isize + di;
                    let nj = j as isize + dj;
                    if ni >= 0 && nj >= 0 && (ni as usize) < n && (nj as usize) < n {
                        if let Some(k) = index[nj as usize * n + ni as usize] {
                            return Neighbor::Interior(k);
                        }
                    }
                    let (frac, point) = crossing(x, y, di as f64 * h, dj as f64 * h);
                    Neighbor::Boundary { frac, point }
                };
                nodes.push(Node {
                    xy: (x, y),
                    east: neighbor(1, 0),
                    west: neighbor(-1, 0),
                    north: neighbor(0, 1),
                    south: neighbor(0, -1),
                });
            }
        }
        Ok(SolveGrid {
            n,
            h,
            r_max,
            nodes,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn interior_index(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(j * self.n + i).copied().flatten()
    }

    /// Hyperbolic conformal factor (1 - |z|^2)^2 / 4 at a node.
    pub fn hyp_factor(&self, k: usize) -> f64 {
        let (x, y) = self.nodes[k].xy;
        let s = 1.0 - x * x - y * y;
        s * s / 4.0
    }
}
