//! The consolidated pipeline: forward verification of every checkable
//! claim at fixed desk scale, in one deterministic run.

use super::{radial_relative_error, seeded_isometry, RunOptions};
use crate::ads::{q22, to_matrix, AdsPoint, TangentVector, Vec22};
use crate::circle::{
    cross_ratio, equivariant_qs_map, qs_constant, sample_defect_against, CircleMap,
    FuchsianGroup, MobiusMap, QsGrid,
};
use crate::error::AdsError;
use crate::hull::{width, QuasiCircle};
use crate::mat2::Mat2;
use crate::report::{Provenance, RunReport};
use crate::rp1::RP1;
use crate::solver::liouville::BoundaryData;
use crate::solver::{
    blend_curvature, bump, derivative_bounds_check, invariance_residual, radial_oracle,
    reflect_invariant, solve_liouville, BlendSpec, CurvatureField, SolveConfig,
};
use crate::surface::{
    fundamental_forms, gluing_map, principal_curvature_bounds, pullback_check, GHConvexSubset,
    GridSpec, SpacelikeChart,
};
use crate::Result;
use rand::{Rng, SeedableRng};

/// Pipeline configuration; deterministic given the seed.
#[derive(Debug, Clone, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    /// Pinching constant for the solver stage; must be positive (and below
    /// the golden-ratio bound that keeps the interval nonempty).
    pub epsilon: f64,
    /// Error-path toggle: feed the lightlike quadrilateral to the gluing
    /// stage, which must stop with a boundary mismatch.
    pub rhombus_to_glue: bool,
    pub rhombus_samples: usize,
    pub family_samples: usize,
    pub solve_grid: usize,
    pub word_lengths: Vec<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 7,
            epsilon: 0.5,
            rhombus_to_glue: false,
            rhombus_samples: 2048,
            family_samples: 512,
            solve_grid: 257,
            word_lengths: vec![6, 8, 10, 12],
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon <= 0.0 {
            return Err(AdsError::InvalidInput(
                "epsilon must be positive (the curvature interval hypothesis)".into(),
            ));
        }
        if 1.0 / self.epsilon <= 1.0 + self.epsilon {
            return Err(AdsError::InvalidInput(format!(
                "epsilon = {} leaves an empty curvature interval",
                self.epsilon
            )));
        }
        if self.solve_grid < 65 || self.rhombus_samples < 256 || self.family_samples < 256 {
            return Err(AdsError::InvalidInput("pipeline resolutions too coarse".into()));
        }
        if self.word_lengths.len() < 2 {
            return Err(AdsError::InvalidInput("need at least two word lengths".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<PipelineConfig> {
        let cfg: PipelineConfig = serde_json::from_str(text)
            .map_err(|e| AdsError::InvalidInput(format!("pipeline config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Run every stage, recording one check row per claim. A failing stage
/// records its error and skips the remaining stages.
pub fn run_pipeline(cfg: &PipelineConfig, opts: &RunOptions) -> Result<RunReport> {
    cfg.validate()?;
    let mut report = RunReport::new("pipeline", cfg.seed);

    let stages: [(&str, fn(&PipelineConfig, &mut RunReport) -> Result<()>); 5] = [
        ("model", stage_model),
        ("equivariant", stage_equivariant),
        ("width", stage_width),
        ("glue", stage_glue),
        ("solve", stage_solve),
    ];
    for (i, (name, stage)) in stages.iter().enumerate() {
        if let Err(err) = stage(cfg, &mut report) {
            let remaining: Vec<&str> = stages[i + 1..].iter().map(|s| s.0).collect();
            report.fail_stage(name, &err, &remaining);
            break;
        }
    }
    if let Some(dir) = &opts.out_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| AdsError::InvalidInput(format!("cannot create {dir:?}: {e}")))?;
        let path = dir.join("pipeline_report.json");
        std::fs::write(&path, report.to_json())
            .map_err(|e| AdsError::InvalidInput(format!("cannot write {path:?}: {e}")))?;
        report.artifact(&path.display().to_string());
    }
    Ok(report)
}

fn stage_model(cfg: &PipelineConfig, report: &mut RunReport) -> Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    // matrix model: -det agrees with the quadratic form
    let mut worst_det: f64 = 0.0;
    for _ in 0..10_000 {
        let x = Vec22::new(
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
        );
        worst_det = worst_det.max((-to_matrix(&x).det() - q22(&x)).abs());
    }
    report.check_below(
        "matrix model: |(-det of M(x)) - q(x)| over 1e4 vectors",
        worst_det,
        1e-12,
        Provenance::Paper,
    );
    // cross-ratio normal form
    let cr = cross_ratio(
        &RP1::from_real(0.0),
        &RP1::from_real(1.0),
        &RP1::from_real(-1.0),
        &RP1::infinity(),
    )?;
    report.check_close("cross-ratio of (0, 1, -1, inf)", cr, -1.0, 0.0, Provenance::Paper);
    // Mobius invariance of the cross-ratio
    let mut worst_cr: f64 = 0.0;
    let mut trials = 0;
    while trials < 10_000 {
        let m = Mat2::new(
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        );
        if m.det() < 0.1 {
            continue;
        }
        let g = MobiusMap::new(m)?;
        let pts: Vec<RP1> = (0..4)
            .map(|_| RP1::from_circle_angle(rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        let mut sep = f64::INFINITY;
        for i in 0..4 {
            for j in (i + 1)..4 {
                sep = sep.min(pts[i].chordal_dist(&pts[j]));
            }
        }
        if sep < 1e-3 {
            continue;
        }
        let a = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3])?;
        let img: Vec<RP1> = pts.iter().map(|p| g.apply_rp1(p)).collect();
        let b = cross_ratio(&img[0], &img[1], &img[2], &img[3])?;
        if a.is_finite() && b.is_finite() {
            worst_cr = worst_cr.max((a - b).abs() / (1.0 + a.abs()));
        }
        trials += 1;
    }
    report.check_below(
        "cross-ratio Mobius invariance over 1e4 quadruples",
        worst_cr,
        1e-10,
        Provenance::Derived,
    );
    // geodesics stay on the quadric
    let mut worst_geo: f64 = 0.0;
    for _ in 0..1000 {
        let a = rng.random_range(-1.5..1.5);
        let b = rng.random_range(-1.5..1.5);
        let p = AdsPoint::new(Vec22::new(a, b, (1.0f64 + a * a + b * b).sqrt(), 0.0))?;
        let v = TangentVector::new(p, Vec22::e4())?;
        let t = rng.random_range(-10.0..10.0);
        let out = crate::ads::geodesic(&p, &v, t)?;
        worst_geo = worst_geo.max((q22(&out.rep) + 1.0).abs());
    }
    report.check_below(
        "geodesic flow stays on the quadric (|t| <= 10)",
        worst_geo,
        1e-10,
        Provenance::Derived,
    );
    Ok(())
}

fn stage_equivariant(cfg: &PipelineConfig, report: &mut RunReport) -> Result<()> {
    let rho1 = FuchsianGroup::free_pair(2.2, 2.4)?;
    let g = MobiusMap::new(Mat2::new(1.0, 0.4, 0.15, 1.0))?;
    let rho2 = rho1.conjugate(&g);
    let mut residuals = Vec::new();
    let mut defect_at_10 = f64::NAN;
    for &wl in &cfg.word_lengths {
        let em = equivariant_qs_map(&rho1, &rho2, wl, 0)?;
        let worst = em.residuals.iter().cloned().fold(0.0, f64::max);
        residuals.push(worst);
        if wl == 10 {
            defect_at_10 = sample_defect_against(&em.map, &g);
        }
    }
    if defect_at_10.is_nan() {
        let em = equivariant_qs_map(&rho1, &rho2, 10, 0)?;
        defect_at_10 = sample_defect_against(&em.map, &g);
    }
    report.check_below(
        "conjugate pair: fixed-point construction recovers the conjugator",
        defect_at_10,
        1e-6,
        Provenance::Derived,
    );
    let monotone = residuals.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-12)
        && residuals[residuals.len() - 1] < residuals[0];
    report.check(
        "equivariance residual decreases with word length",
        residuals[residuals.len() - 1],
        "decreasing sequence",
        f64::INFINITY,
        Provenance::Derived,
        monotone,
    );
    Ok(())
}

fn stage_width(cfg: &PipelineConfig, report: &mut RunReport) -> Result<()> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    // totally geodesic cases
    for (label, map) in [
        ("identity", CircleMap::identity(cfg.family_samples)),
        (
            "Mobius",
            CircleMap::from_mobius(&MobiusMap::new(Mat2::new(1.4, 0.3, 0.2, 0.9))?, cfg.family_samples)?,
        ),
    ] {
        let qc = QuasiCircle::graph_curve(&map, cfg.family_samples)?;
        let hull = qc.convex_hull()?;
        let w = width(&qc, &hull, 50)?;
        report.check_close(
            &format!("width of the {label} graph"),
            w.width,
            0.0,
            1e-9,
            Provenance::Trivial,
        );
    }
    // the lightlike quadrilateral attains the threshold
    let rhombus = QuasiCircle::rhombus(cfg.rhombus_samples)?;
    let hull = rhombus.convex_hull()?;
    let w = width(&rhombus, &hull, 80)?;
    report.check_close(
        "width of the lightlike quadrilateral",
        w.width,
        half_pi,
        1e-3,
        Provenance::Derived,
    );
    // monotone family
    let mut prev_w = -1.0;
    let mut prev_k = 0.0;
    let mut monotone = true;
    for s in [2.0, 8.0, 32.0] {
        let f = CircleMap::piecewise_scale(s, cfg.family_samples)?;
        let qc = QuasiCircle::graph_curve(&f, cfg.family_samples)?;
        let hull = qc.convex_hull()?;
        let w = width(&qc, &hull, 50)?;
        let k = qs_constant(&f, &QsGrid::default())?.k;
        monotone &= w.width > prev_w && k > prev_k && w.width < half_pi - 1e-3;
        report.check(
            &format!("family s = {s}: width below threshold and increasing"),
            w.width,
            "< pi/2 - 1e-3, increasing",
            1e-3,
            Provenance::Derived,
            monotone,
        );
        prev_w = w.width;
        prev_k = k;
    }
    // criterion consistency on the extremes
    let crit = rhombus.criterion(40)?;
    report.check(
        "threshold curve flagged non-quasi-symmetric consistently",
        if crit.consistent { 1.0 } else { 0.0 },
        "consistent",
        0.0,
        Provenance::Derived,
        crit.consistent,
    );
    Ok(())
}

fn stage_glue(cfg: &PipelineConfig, report: &mut RunReport) -> Result<()> {
    let grid = GridSpec::default();
    let t = std::f64::consts::FRAC_PI_6;
    if cfg.rhombus_to_glue {
        // deliberate mismatch: the quadrilateral is not the charts' boundary
        let (omega, _) = super::resolve_fixture("mismatch:rhombus", grid)?;
        let _ = gluing_map(&omega)?;
        return Ok(());
    }
    let eps_t = (0.5 * (1.0 / (t.cos() * t.cos()) - 1.0)).min(0.45);
    let omega = GHConvexSubset::equidistant_pair(t, grid, None, eps_t)?;
    let glue = gluing_map(&omega)?;
    report.check_below(
        "gluing map of the equidistant pair deviates from the identity by",
        glue.identity_deviation,
        1e-4,
        Provenance::Derived,
    );
    // invariance under ten seeded isometries
    let mut worst_dev: f64 = 0.0;
    for k in 0..10 {
        let iso = seeded_isometry(cfg.seed.wrapping_add(k));
        let moved = GHConvexSubset::equidistant_pair(t, grid, Some(iso), eps_t)?;
        let mg = gluing_map(&moved)?;
        worst_dev = worst_dev.max(mg.normalized.sup_distance(&glue.normalized, 256));
    }
    report.check_below(
        "normalized gluing map invariance under 10 random isometries",
        worst_dev,
        1e-4,
        Provenance::Derived,
    );
    let d = principal_curvature_bounds(&omega)?;
    report.check_close(
        "principal curvature bound of the pi/6 pair",
        d,
        3f64.sqrt(),
        1e-8,
        Provenance::Derived,
    );
    // pullback identities across the equidistant family
    for tt in [0.0, std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_4] {
        let mut g = GridSpec {
            n_r: 17,
            n_theta: 24,
            ..GridSpec::default()
        };
        let mut pull = Vec::new();
        let mut gauss = Vec::new();
        let mut fuchs = Vec::new();
        for _ in 0..3 {
            let chart = SpacelikeChart::equidistant(tt, g)?;
            let field = fundamental_forms(&chart)?;
            let rep = pullback_check(&chart, &field)?;
            pull.push(rep.left.max(rep.right));
            gauss.push(field.gauss_relation_residual());
            fuchs.push(rep.vs_hyperbolic);
            g = g.refined();
        }
        let pull_order = (pull[0] / pull[2]).log2() / 2.0;
        let gauss_order = (gauss[0] / gauss[2]).log2() / 2.0;
        report.check_close(
            &format!("pullback residual convergence order at t = {tt:.3}"),
            pull_order,
            2.0,
            0.2,
            Provenance::Derived,
        );
        report.check_close(
            &format!("Gauss relation convergence order at t = {tt:.3}"),
            gauss_order,
            2.0,
            0.2,
            Provenance::Derived,
        );
        // both pullbacks equal the hyperbolic metric at second order
        report.check(
            &format!("pullbacks reproduce the hyperbolic metric at t = {tt:.3}"),
            fuchs[2],
            "O(h^2): quarter of the coarse residual",
            fuchs[0] * 0.35,
            Provenance::Paper,
            fuchs[2] <= fuchs[0] * 0.35,
        );
    }
    // convexity: positive curvature product on every sampled node
    for chart in [&omega.future, &omega.past] {
        let field = fundamental_forms(chart)?;
        let min_product = field
            .forms
            .iter()
            .flatten()
            .map(|f| f.kappa.0 * f.kappa.1)
            .fold(f64::INFINITY, f64::min);
        report.check(
            "convexity: product of principal curvatures positive",
            min_product,
            "> 0",
            0.0,
            Provenance::Derived,
            min_product > 0.0,
        );
    }
    Ok(())
}

fn stage_solve(cfg: &PipelineConfig, report: &mut RunReport) -> Result<()> {
    let r_max = (3.0f64).tanh();
    let solve_cfg = SolveConfig::default();
    // constant curvature reproduces the closed form
    let constant = CurvatureField::constant(-4.0, 0.2)?;
    let sol = solve_liouville(
        &constant,
        0.9,
        (cfg.solve_grid / 2).max(65),
        BoundaryData::Constant(-(2f64.ln())),
        &solve_cfg,
    )?;
    let target = -(2f64.ln());
    let worst = sol.u.iter().fold(0.0f64, |m, u| m.max((u - target).abs()));
    report.check_below(
        "constant curvature -4 reproduces u = -ln 2",
        worst,
        1e-10,
        Provenance::Trivial,
    );
    // radial field against the shooting oracle, with a two-grid order
    let radial = CurvatureField::radial_gauss(cfg.epsilon, gap_for(cfg.epsilon))?;
    let rho_max = 2.0 * r_max.atanh();
    let boundary = -0.5 * radial.eval_radial(rho_max).abs().ln();
    let oracle = radial_oracle(&radial, rho_max, boundary, 24_000)?;
    let coarse = solve_liouville(
        &radial,
        r_max,
        (cfg.solve_grid - 1) / 2 + 1,
        BoundaryData::FarField,
        &solve_cfg,
    )?;
    let fine = solve_liouville(&radial, r_max, cfg.solve_grid, BoundaryData::FarField, &solve_cfg)?;
    let rel_coarse = radial_relative_error(&coarse, &oracle);
    let rel_fine = radial_relative_error(&fine, &oracle);
    report.check_below(
        "radial solve matches the shooting oracle (relative)",
        rel_fine,
        1e-4,
        Provenance::Derived,
    );
    let order = (rel_coarse / rel_fine).log2();
    report.check_close(
        "two-grid convergence order against the oracle",
        order,
        2.0,
        0.2,
        Provenance::Derived,
    );
    report.check(
        "Newton iterations stay small",
        fine.newton_iterations as f64,
        "<= 30",
        30.0,
        Provenance::Derived,
        fine.newton_iterations <= 30,
    );
    // blend construction: regions, range, bound stability
    let spec2 = BlendSpec::new(2.0, cfg.epsilon)?;
    let blended = blend_curvature(&radial, spec2)?;
    report.check_close(
        "blend equals the field inside the cutoff ball",
        blended.eval_radial(1.0) - radial.eval_radial(1.0),
        0.0,
        0.0,
        Provenance::Trivial,
    );
    report.check_close(
        "blend equals -1/eps outside twice the cutoff",
        blended.eval_radial(6.0),
        -1.0 / cfg.epsilon,
        0.0,
        Provenance::Trivial,
    );
    let mid = 3.0;
    let phi = bump(mid / 2.0);
    report.check_close(
        "blend midpoint is the explicit convex combination",
        blended.eval_radial(mid),
        phi * radial.eval_radial(mid) + (1.0 - phi) * (-1.0 / cfg.epsilon),
        0.0,
        Provenance::Derived,
    );
    let mut range_ok = true;
    let eps_prime = cfg.epsilon.min(gap_for(cfg.epsilon));
    for i in 0..10_000 {
        let dd = 12.0 * i as f64 / 9999.0;
        let v = blended.eval_radial(dd);
        range_ok &= v >= -1.0 / cfg.epsilon - 1e-12 && v <= -1.0 - eps_prime + 1e-12;
    }
    report.check(
        "blend range stays pinched on a 1e4-point audit",
        if range_ok { 1.0 } else { 0.0 },
        "within [-1/eps, -1-eps']",
        0.0,
        Provenance::Derived,
        range_ok,
    );
    let mut sups: Vec<[f64; 3]> = Vec::new();
    for r_n in [2.0, 4.0, 8.0] {
        let b = blend_curvature(&radial, BlendSpec::new(r_n, cfg.epsilon)?)?;
        sups.push(derivative_bounds_check(&b, 3, 2.0 * r_n + 2.0)?.sup);
    }
    for p in 0..3 {
        let vals: Vec<f64> = sups.iter().map(|s| s[p]).collect();
        let hi = vals.iter().cloned().fold(0.0f64, f64::max);
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        report.check_below(
            &format!("order-{} derivative bound spread across cutoff radii", p + 1),
            if hi > 0.0 { (hi - lo) / hi } else { 0.0 },
            0.10,
            Provenance::Derived,
        );
    }
    // group-invariant extension
    let group = FuchsianGroup::free_pair(6.0, 6.0)?;
    let small_blend = blend_curvature(&radial, BlendSpec::new(1.2, cfg.epsilon)?)?;
    let invariant = reflect_invariant(&small_blend, &group, 0)?;
    let resid = invariance_residual(&invariant, &group, 1000)?;
    report.check_below(
        "group-invariant extension residual over the generators",
        resid,
        1e-10,
        Provenance::Derived,
    );
    Ok(())
}

fn gap_for(epsilon: f64) -> f64 {
    // a bump depth that keeps the range inside the pinching interval
    (0.5 * (1.0 / epsilon - 1.0)).min(1.5 * epsilon).max(epsilon * 1.2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_epsilon_rejected_at_validation() {
        let cfg = PipelineConfig {
            epsilon: 0.0,
            ..PipelineConfig::default()
        };
        let err = run_pipeline(&cfg, &RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn rhombus_to_glue_surfaces_boundary_mismatch() {
        let cfg = PipelineConfig {
            rhombus_to_glue: true,
            rhombus_samples: 512,
            family_samples: 256,
            solve_grid: 129,
            word_lengths: vec![4, 6],
            ..PipelineConfig::default()
        };
        let report = run_pipeline(&cfg, &RunOptions::default()).unwrap();
        assert_eq!(report.exit_code(), 4, "{}", report.render_text());
        assert!(report
            .skipped_stages
            .iter()
            .any(|s| s.contains("solve")));
    }
}
