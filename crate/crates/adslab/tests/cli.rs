//! End-to-end checks of the command-line front door: exit codes,
//! determinism of emitted reports, and artifact output.

use std::process::Command;

fn adslab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adslab"))
}

#[test]
fn qs_builtin_identity_passes() {
    let out = adslab().args(["qs", "identity"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS]"), "{text}");
}

#[test]
fn malformed_csv_exits_2_with_line_diagnostic() {
    let dir = std::env::temp_dir().join("adslab_cli_bad_csv");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.csv");
    std::fs::write(&path, "theta,f_theta\n0.0,0.0\noops,1.0\n").unwrap();
    let out = adslab()
        .args(["qs", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn hull_rhombus_reports_half_pi_and_writes_mesh() {
    let dir = std::env::temp_dir().join("adslab_cli_hull_out");
    let _ = std::fs::remove_dir_all(&dir);
    let out = adslab()
        .args([
            "hull",
            "rhombus",
            "--samples",
            "512",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let off = std::fs::read_to_string(dir.join("hull.off")).unwrap();
    assert!(off.starts_with("OFF\n"));
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("hull.json")).unwrap()).unwrap();
    let w = sidecar["width"].as_f64().unwrap();
    assert!((w - std::f64::consts::FRAC_PI_2).abs() <= 1e-3);
    assert_eq!(sidecar["future_faces"].as_array().unwrap().len(), 2);
}

#[test]
fn glue_mismatch_exits_4() {
    let out = adslab().args(["glue", "mismatch:rhombus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn glue_equidistant_passes() {
    let out = adslab()
        .args(["glue", "equidistant:t=pi/6"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn solve_constant_passes_and_exports() {
    let dir = std::env::temp_dir().join("adslab_cli_solve_out");
    let _ = std::fs::remove_dir_all(&dir);
    let out = adslab()
        .args([
            "solve",
            "constant:k=-4",
            "--grid",
            "65",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("factor.csv")).unwrap();
    assert!(csv.starts_with("x,y,u\n"));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("factor.json")).unwrap()).unwrap();
    assert!(meta["residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn pipeline_zero_epsilon_rejected_at_validation() {
    let dir = std::env::temp_dir().join("adslab_cli_eps0");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"epsilon": 0.0}"#).unwrap();
    let out = adslab()
        .args(["pipeline", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pipeline_reports_are_byte_identical() {
    let run = |dir: &std::path::Path| -> Vec<u8> {
        let out = adslab()
            .args(["pipeline", "--out", dir.to_str().unwrap(), "--seed", "7"])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(dir.join("pipeline_report.json")).unwrap()
    };
    let d1 = std::env::temp_dir().join("adslab_cli_pipe1");
    let d2 = std::env::temp_dir().join("adslab_cli_pipe2");
    let _ = std::fs::remove_dir_all(&d1);
    let _ = std::fs::remove_dir_all(&d2);
    let a = run(&d1);
    let b = run(&d2);
    assert_eq!(a, b, "pipeline reports differ between identical runs");
}

#[test]
fn unknown_command_exits_2() {
    let out = adslab().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn glue_accepts_json_fixture_pairs() {
    let dir = std::env::temp_dir().join("adslab_cli_fixture");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let fixture = dir.join("pair.json");
    std::fs::write(
        &fixture,
        r#"{
            "epsilon": 0.1666,
            "future": {"kind": "graph", "height_expr": "0.5236 + 0.05*exp(-d^2)"},
            "past": {"kind": "equidistant", "t": -0.5235987755982988}
        }"#,
    )
    .unwrap();
    let out = adslab()
        .args([
            "glue",
            fixture.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // nodewise residual artifact in the (node, quantity, value) schema
    let csv = std::fs::read_to_string(dir.join("residuals.csv")).unwrap();
    assert!(csv.starts_with("node,quantity,value\n"));
    assert!(csv.lines().count() > 100);
}

#[test]
fn glue_rejects_malformed_fixture_kind() {
    let dir = std::env::temp_dir().join("adslab_cli_fixture_bad");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let fixture = dir.join("pair.json");
    std::fs::write(
        &fixture,
        r#"{"epsilon": 0.2, "future": {"kind": "nonsense"}, "past": {"kind": "equidistant", "t": 0.3}}"#,
    )
    .unwrap();
    let out = adslab()
        .args(["glue", fixture.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn width_results_do_not_depend_on_thread_count() {
    let run = |threads: &str| -> String {
        let dir = std::env::temp_dir().join(format!("adslab_cli_threads_{threads}"));
        let _ = std::fs::remove_dir_all(&dir);
        let out = adslab()
            .args([
                "hull",
                "piecewise:s=8",
                "--samples",
                "1024",
                "--out",
                dir.to_str().unwrap(),
            ])
            .env("ADSLAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read_to_string(dir.join("hull.json")).unwrap()
    };
    let single = run("1");
    let many = run("8");
    assert_eq!(single, many, "width artifacts differ across thread counts");
}
