//! The gluing map of an equidistant pair is the identity, stays the
//! identity under ambient isometries, and its principal curvature bound is
//! the cotangent of the distance.
//!
//! Run: cargo run --release --example gluing_fuchsian

use adslab::experiments::seeded_isometry;
use adslab::surface::{gluing_map, principal_curvature_bounds, GHConvexSubset, GridSpec};

fn main() {
    let t = std::f64::consts::FRAC_PI_6;
    let grid = GridSpec::default();
    let omega = GHConvexSubset::equidistant_pair(t, grid, None, 1.0 / 6.0).unwrap();
    let glue = gluing_map(&omega).unwrap();
    println!("equidistant pair at t = pi/6:");
    println!("  gluing map identity deviation: {:.3e}", glue.identity_deviation);
    println!("  quasi-symmetry constant:       {:.9}", glue.qs);
    println!(
        "  principal curvature bound:     {:.9} (cot t = {:.9})",
        principal_curvature_bounds(&omega).unwrap(),
        1.0 / t.tan()
    );

    println!("\nunder ambient isometries the normalized gluing map is unchanged:");
    for seed in [1u64, 2, 3] {
        let moved =
            GHConvexSubset::equidistant_pair(t, grid, Some(seeded_isometry(seed)), 1.0 / 6.0)
                .unwrap();
        let mg = gluing_map(&moved).unwrap();
        println!(
            "  seed {seed}: deviation from the unmoved gluing map {:.3e}",
            mg.normalized.sup_distance(&glue.normalized, 256)
        );
    }
}
