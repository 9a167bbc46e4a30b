//! The cutoff blend of a curvature field: unchanged inside the cutoff
//! ball, the constant -1/eps outside twice the radius, with derivative
//! bounds that do not drift as the cutoff radius grows; extended over a
//! Fuchsian group by the reduction walk.
//!
//! Run: cargo run --release --example curvature_blend

use adslab::circle::FuchsianGroup;
use adslab::solver::{
    blend_curvature, derivative_bounds_check, invariance_residual, reflect_invariant,
    BlendSpec, CurvatureField,
};

fn main() {
    let base = CurvatureField::radial_gauss(0.5, 0.75).unwrap();
    println!("base field: K(0) = {}, K(inf) = -2", base.eval_radial(0.0));

    println!("\nderivative bounds across cutoff radii:");
    println!("{:>6} {:>12} {:>12} {:>12}", "r_n", "order 1", "order 2", "order 3");
    for r_n in [2.0, 4.0, 8.0] {
        let blended = blend_curvature(&base, BlendSpec::new(r_n, 0.5).unwrap()).unwrap();
        let b = derivative_bounds_check(&blended, 3, 2.0 * r_n + 2.0).unwrap();
        println!(
            "{:>6} {:>12.6} {:>12.6} {:>12.6}",
            r_n, b.sup[0], b.sup[1], b.sup[2]
        );
    }

    let group = FuchsianGroup::free_pair(6.0, 6.0).unwrap();
    let blended = blend_curvature(&base, BlendSpec::new(1.2, 0.5).unwrap()).unwrap();
    let invariant = reflect_invariant(&blended, &group, 0).unwrap();
    let resid = invariance_residual(&invariant, &group, 1000).unwrap();
    println!("\ngroup-invariant extension residual: {resid:.3e}");
}
