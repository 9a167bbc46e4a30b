//! Conformal barycentric extension of circle maps into the disc.
//!
//! Run: cargo run --release --example barycentric_extension

use adslab::circle::{barycentric_extension, CircleMap, DouadyEarleConfig};

fn main() {
    let cfg = DouadyEarleConfig::default();
    let id = CircleMap::identity(256);
    println!("extension of the identity fixes the disc:");
    for z in [(0.0, 0.0), (0.4, 0.2), (-0.3, 0.5)] {
        let w = barycentric_extension(&id, z, &cfg).unwrap();
        println!("  DE(id)({z:?}) = ({:.9}, {:.9})", w.0, w.1);
    }

    let f = CircleMap::piecewise_scale(2.0, 1024).unwrap();
    println!("\nextension of the distorted map at the origin:");
    let w = barycentric_extension(&f, (0.0, 0.0), &cfg).unwrap();
    println!("  DE(f)(0) = ({:.9}, {:.9})", w.0, w.1);
    let fine = DouadyEarleConfig {
        quadrature_nodes: 2048,
        ..cfg
    };
    let w2 = barycentric_extension(&f, (0.0, 0.0), &fine).unwrap();
    println!(
        "  quadrature refinement drift: {:.3e}",
        ((w.0 - w2.0).powi(2) + (w.1 - w2.1).powi(2)).sqrt()
    );
}
