//! Machine-readable run reports: one row per check, each carrying its
//! tolerance and a provenance tag, plus a deterministic environment
//! fingerprint (no timestamps, so identical runs serialize identically).

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Expected value validated against the reference construction.
    Paper,
    /// Expected value by direct evaluation.
    Trivial,
    /// Expected value from an independent numerical oracle.
    Derived,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub computed: f64,
    pub expected: String,
    pub tol: f64,
    pub provenance: Provenance,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Environment {
    pub crate_version: &'static str,
    pub target_os: &'static str,
    pub target_arch: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub environment: Environment,
    pub checks: Vec<CheckRow>,
    pub artifacts: Vec<String>,
    /// Set when a stage aborted; remaining stages are skipped.
    pub error: Option<String>,
    pub skipped_stages: Vec<String>,
    pub passed: bool,
    /// Exit code of the aborting error, when a stage aborted.
    pub abort_code: Option<i32>,
}

impl RunReport {
    pub fn new(command: &str, seed: u64) -> RunReport {
        RunReport {
            command: command.to_string(),
            seed,
            environment: Environment {
                crate_version: env!("CARGO_PKG_VERSION"),
                target_os: std::env::consts::OS,
                target_arch: std::env::consts::ARCH,
            },
            checks: Vec::new(),
            artifacts: Vec::new(),
            error: None,
            skipped_stages: Vec::new(),
            passed: true,
            abort_code: None,
        }
    }

    /// Record a check; `pass` is |computed - target| <= tol when a numeric
    /// target is supplied, otherwise the caller's verdict.
    pub fn check(
        &mut self,
        name: &str,
        computed: f64,
        expected: &str,
        tol: f64,
        provenance: Provenance,
        pass: bool,
    ) {
        self.passed &= pass;
        self.checks.push(CheckRow {
            name: name.to_string(),
            computed,
            expected: expected.to_string(),
            tol,
            provenance,
            pass,
        });
    }

    pub fn check_close(
        &mut self,
        name: &str,
        computed: f64,
        target: f64,
        tol: f64,
        provenance: Provenance,
    ) {
        let pass = (computed - target).abs() <= tol;
        self.check(name, computed, &format!("{target}"), tol, provenance, pass);
    }

    pub fn check_below(
        &mut self,
        name: &str,
        computed: f64,
        cap: f64,
        provenance: Provenance,
    ) {
        let pass = computed <= cap;
        self.check(name, computed, &format!("<= {cap}"), cap, provenance, pass);
    }

    pub fn artifact(&mut self, path: &str) {
        self.artifacts.push(path.to_string());
    }

    pub fn fail_stage(&mut self, stage: &str, err: &crate::AdsError, remaining: &[&str]) {
        self.passed = false;
        self.error = Some(format!("{stage}: {err}"));
        self.abort_code = Some(err.exit_code());
        for r in remaining {
            self.skipped_stages
                .push(format!("{r}: skipped after {stage} failed"));
        }
    }

    /// Exit-code contract: 0 when all checks pass, the aborting error's
    /// code when a stage aborted, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if let Some(code) = self.abort_code {
            return code;
        }
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// One human line per check.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {:<58} computed {:>14.6e}  expected {:<14} tol {:.1e} ({})\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.computed,
                c.expected,
                c.tol,
                match c.provenance {
                    Provenance::Paper => "paper",
                    Provenance::Trivial => "trivial",
                    Provenance::Derived => "derived",
                }
            ));
        }
        for s in &self.skipped_stages {
            out.push_str(&format!("[SKIP] {s}\n"));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("[ABORT] {e}\n"));
        }
        out.push_str(&format!(
            "{}: {} checks, {}\n",
            self.command,
            self.checks.len(),
            if self.passed { "all passed" } else { "FAILURES" }
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_serialization_is_deterministic() {
        let mk = || {
            let mut r = RunReport::new("qs", 7);
            r.check_close("k", 2.0, 2.0, 1e-6, Provenance::Derived);
            r.check_below("deviation", 1e-9, 1e-4, Provenance::Trivial);
            r.artifact("out/map.csv");
            r
        };
        assert_eq!(mk().to_json(), mk().to_json());
    }

    #[test]
    fn failing_check_flips_exit_code() {
        let mut r = RunReport::new("hull", 1);
        r.check_close("width", 1.0, 0.0, 1e-9, Provenance::Trivial);
        assert!(!r.passed);
        assert_eq!(r.exit_code(), 1);
        let e = crate::AdsError::BoundaryMismatch { mismatch: 1.0 };
        r.fail_stage("glue", &e, &["solve"]);
        assert_eq!(r.exit_code(), 4);
        assert_eq!(r.skipped_stages.len(), 1);
    }
}
