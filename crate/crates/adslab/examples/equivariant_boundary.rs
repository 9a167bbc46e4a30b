//! Equivariant boundary maps of matched Fuchsian pairs from attracting
//! fixed points: a conjugated pair recovers the conjugator.
//!
//! Run: cargo run --release --example equivariant_boundary

use adslab::circle::{equivariant_qs_map, sample_defect_against, FuchsianGroup, MobiusMap};
use adslab::Mat2;

fn main() {
    let rho1 = FuchsianGroup::free_pair(2.2, 2.4).unwrap();
    let g = MobiusMap::new(Mat2::new(1.0, 0.4, 0.15, 1.0)).unwrap();
    let rho2 = rho1.conjugate(&g);

    println!("conjugate pair: residuals by enumeration depth");
    println!("{:>6} {:>10} {:>14} {:>16}", "depth", "pairs", "residual", "defect vs g");
    for wl in [6usize, 8, 10, 12] {
        let em = equivariant_qs_map(&rho1, &rho2, wl, 0).unwrap();
        let worst = em.residuals.iter().cloned().fold(0.0, f64::max);
        println!(
            "{:>6} {:>10} {:>14.3e} {:>16.3e}",
            wl,
            em.pairs_used,
            worst,
            sample_defect_against(&em.map, &g)
        );
    }
}
