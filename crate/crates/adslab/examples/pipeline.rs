//! The full verification pipeline in one call, printing one line per check.
//!
//! Run: cargo run --release --example pipeline

use adslab::experiments::{run_pipeline, PipelineConfig, RunOptions};

fn main() {
    let cfg = PipelineConfig::default();
    let report = run_pipeline(&cfg, &RunOptions::default()).unwrap();
    print!("{}", report.render_text());
    std::process::exit(report.exit_code());
}
