//! Prescribed-curvature solves: exact constant-curvature reproduction and
//! agreement with the independent radial shooting oracle.
//!
//! Run: cargo run --release --example liouville_solve

use adslab::experiments::radial_relative_error;
use adslab::solver::{
    radial_oracle, solve_liouville, BoundaryData, CurvatureField, SolveConfig,
};

fn main() {
    let cfg = SolveConfig::default();

    // constant curvature: the solution is a constant
    let constant = CurvatureField::constant(-4.0, 0.2).unwrap();
    let sol = solve_liouville(&constant, 0.9, 129, BoundaryData::Constant(-(2f64.ln())), &cfg)
        .unwrap();
    let target = -(2f64.ln());
    let worst = sol.u.iter().fold(0.0f64, |m, u| m.max((u - target).abs()));
    println!("K = -4: sup |u + ln 2| = {worst:.3e} after {} Newton steps", sol.newton_iterations);

    // radial bump: compare with the geodesic-polar shooting oracle
    let field = CurvatureField::radial_gauss(0.5, 0.75).unwrap();
    let r_max = 3f64.tanh();
    let rho_max = 6.0;
    let boundary = -0.5 * field.eval_radial(rho_max).abs().ln();
    let oracle = radial_oracle(&field, rho_max, boundary, 24_000).unwrap();
    for n in [65usize, 129, 257] {
        let sol = solve_liouville(&field, r_max, n, BoundaryData::FarField, &cfg).unwrap();
        println!(
            "radial bump, grid {n:>3}^2: residual {:.2e}, oracle relative error {:.3e}",
            sol.residual,
            radial_relative_error(&sol, &oracle)
        );
    }
}
