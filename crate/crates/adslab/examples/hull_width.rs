//! Convex hulls of boundary curves and their widths: the totally geodesic
//! case collapses to a plane, the lightlike quadrilateral attains pi/2.
//!
//! Run: cargo run --release --example hull_width

use adslab::circle::CircleMap;
use adslab::hull::{width, QuasiCircle};

fn main() {
    println!("=== Width of the convex hull ===\n");
    println!("{:<24} {:>12} {:>10} {:>8}", "curve", "width", "faces", "planar");
    for name in ["identity", "s=2", "s=8", "s=32", "rhombus"] {
        let qc = match name {
            "identity" => QuasiCircle::graph_curve(&CircleMap::identity(512), 512).unwrap(),
            "rhombus" => QuasiCircle::rhombus(2048).unwrap(),
            s => {
                let scale: f64 = s.strip_prefix("s=").unwrap().parse().unwrap();
                let f = CircleMap::piecewise_scale(scale, 512).unwrap();
                QuasiCircle::graph_curve(&f, 512).unwrap()
            }
        };
        let hull = qc.convex_hull().unwrap();
        let w = width(&qc, &hull, 60).unwrap();
        println!(
            "{:<24} {:>12.8} {:>10} {:>8}",
            name,
            w.width,
            hull.faces.len(),
            hull.degenerate
        );
    }
    println!("\npi/2 = {:.8}", std::f64::consts::FRAC_PI_2);
    println!("a curve is a quasicircle exactly when its width stays below pi/2");
}
