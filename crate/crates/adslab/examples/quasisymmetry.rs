//! Quasi-symmetry constants and cross-ratio norms of circle maps.
//!
//! Run: cargo run --release --example quasisymmetry

use adslab::circle::{cross_ratio_norm, normalize, qs_constant, CircleMap, QsGrid};

fn main() {
    println!("=== Distortion of circle homeomorphisms ===\n");
    let grid = QsGrid::default();

    println!("{:<22} {:>10} {:>12}", "map", "k", "cross-ratio M");
    for s in [1.0, 2.0, 4.0, 8.0, 16.0] {
        let map = if s == 1.0 {
            CircleMap::identity(512)
        } else {
            CircleMap::piecewise_scale(s, 512).unwrap()
        };
        let k = qs_constant(&map, &grid).unwrap();
        let m = cross_ratio_norm(&map, 48).unwrap();
        println!(
            "{:<22} {:>10.6} {:>12.6}",
            if s == 1.0 {
                "identity".to_string()
            } else {
                format!("one-sided scale s={s}")
            },
            k.k,
            m.norm
        );
    }

    // three-point normalization kills Mobius post-composition
    let f = CircleMap::piecewise_scale(3.0, 512).unwrap();
    let g = adslab::circle::MobiusMap::new(adslab::Mat2::new(1.3, -0.2, 0.4, 1.0)).unwrap();
    let gf = f.post_compose(&g).unwrap();
    let d = normalize(&f)
        .unwrap()
        .sup_distance(&normalize(&gf).unwrap(), 512);
    println!("\nnormalize(g o f) vs normalize(f): sup distance {d:.3e}");
}
