//! Thin command-line front end over the experiment runner.
//!
//!   adslab <qs|hull|glue|solve|pipeline> [--config <file.json>]
//!          [--out <dir>] [--seed <u64>] [--tol <float>]
//!          [--samples <int>] [--grid <int>] [selector]
//!
//! Exit codes: 0 pass, 2 input, 3 chart, 4 boundary, 5 convergence,
//! 1 internal/check failure. ADSLAB_THREADS caps worker parallelism.

use adslab::experiments::{
    run_glue, run_hull, run_pipeline, run_qs, run_solve, PipelineConfig, RunOptions,
};
use adslab::report::RunReport;
use adslab::AdsError;
use std::path::PathBuf;
use std::process::ExitCode;

struct Args {
    command: String,
    selector: Option<String>,
    config: Option<PathBuf>,
    opts: RunOptions,
}

fn usage() -> String {
    "usage: adslab <qs|hull|glue|solve|pipeline> [--config <file.json>] \
     [--out <dir>] [--seed <u64>] [--tol <float>] [--samples <int>] \
     [--grid <int>] [selector]"
        .to_string()
}

fn parse_args(argv: &[String]) -> Result<Args, String> {
    let mut it = argv.iter();
    let command = it.next().cloned().ok_or_else(usage)?;
    let mut args = Args {
        command,
        selector: None,
        config: None,
        opts: RunOptions::default(),
    };
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => {
                args.config = Some(PathBuf::from(
                    it.next().ok_or("--config needs a path")?,
                ))
            }
            "--out" => {
                args.opts.out_dir =
                    Some(PathBuf::from(it.next().ok_or("--out needs a path")?))
            }
            "--seed" => {
                args.opts.seed = it
                    .next()
                    .ok_or("--seed needs a value")?
                    .parse()
                    .map_err(|_| "--seed needs an unsigned integer")?
            }
            "--tol" => {
                args.opts.tol = Some(
                    it.next()
                        .ok_or("--tol needs a value")?
                        .parse()
                        .map_err(|_| "--tol needs a float")?,
                )
            }
            "--samples" => {
                args.opts.samples = Some(
                    it.next()
                        .ok_or("--samples needs a value")?
                        .parse()
                        .map_err(|_| "--samples needs an integer")?,
                )
            }
            "--grid" => {
                args.opts.grid = Some(
                    it.next()
                        .ok_or("--grid needs a value")?
                        .parse()
                        .map_err(|_| "--grid needs an integer")?,
                )
            }
            other if !other.starts_with("--") && args.selector.is_none() => {
                args.selector = Some(other.to_string())
            }
            other => return Err(format!("unknown argument {other:?}\n{}", usage())),
        }
    }
    Ok(args)
}

fn config_json(args: &Args) -> Result<Option<serde_json::Value>, AdsError> {
    match &args.config {
        None => Ok(None),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                AdsError::InvalidInput(format!("cannot read config {path:?}: {e}"))
            })?;
            serde_json::from_str(&text)
                .map(Some)
                .map_err(|e| AdsError::InvalidInput(format!("config {path:?}: {e}")))
        }
    }
}

fn selector_from(args: &Args, cfg: &Option<serde_json::Value>, key: &str) -> Option<String> {
    args.selector.clone().or_else(|| {
        cfg.as_ref()
            .and_then(|c| c.get(key))
            .and_then(|v| v.as_str())
            .map(str::to_string)
    })
}

fn run(args: &Args) -> Result<RunReport, AdsError> {
    let cfg = config_json(args)?;
    match args.command.as_str() {
        "qs" => {
            let sel = selector_from(args, &cfg, "map")
                .ok_or_else(|| AdsError::InvalidInput("qs needs a map selector".into()))?;
            run_qs(&sel, &args.opts)
        }
        "hull" => {
            let sel = selector_from(args, &cfg, "map")
                .ok_or_else(|| AdsError::InvalidInput("hull needs a map selector".into()))?;
            run_hull(&sel, &args.opts)
        }
        "glue" => {
            let sel = selector_from(args, &cfg, "fixture").ok_or_else(|| {
                AdsError::InvalidInput("glue needs a fixture selector".into())
            })?;
            run_glue(&sel, &args.opts)
        }
        "solve" => {
            let sel = selector_from(args, &cfg, "curvature").ok_or_else(|| {
                AdsError::InvalidInput("solve needs a curvature selector".into())
            })?;
            let sweep = cfg
                .as_ref()
                .and_then(|c| c.get("blend_sweep"))
                .and_then(|v| v.as_bool())
                .unwrap_or(false);
            run_solve(&sel, sweep, &args.opts)
        }
        "pipeline" => {
            let pipeline_cfg = match &cfg {
                Some(v) => {
                    let mut parsed: PipelineConfig = serde_json::from_value(v.clone())
                        .map_err(|e| AdsError::InvalidInput(format!("pipeline config: {e}")))?;
                    parsed.seed = args.opts.seed;
                    parsed.validate()?;
                    parsed
                }
                None => PipelineConfig {
                    seed: args.opts.seed,
                    ..PipelineConfig::default()
                },
            };
            run_pipeline(&pipeline_cfg, &args.opts)
        }
        other => Err(AdsError::InvalidInput(format!(
            "unknown command {other:?}\n{}",
            usage()
        ))),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let args = match parse_args(&argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    match run(&args) {
        Ok(report) => {
            print!("{}", report.render_text());
            if let Some(dir) = &args.opts.out_dir {
                let path = dir.join("report.json");
                if std::fs::create_dir_all(dir).is_ok()
                    && std::fs::write(&path, report.to_json()).is_ok()
                {
                    println!("report written to {}", path.display());
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
