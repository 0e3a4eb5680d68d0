//! Residual reports produced by the verification suites.

use std::fmt;

use serde::Serialize;

/// Whether a check passes by staying under its threshold, or (for negative
/// controls) by exceeding it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Below,
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Short statement of the identity being checked.
    #[serde(rename = "paper_ref")]
    pub reference: String,
    pub residual: f64,
    pub tol: f64,
    #[serde(skip)]
    pub expect: Expect,
    #[serde(rename = "pass")]
    pub passed: bool,
}

impl Check {
    pub fn below(
        name: impl Into<String>,
        reference: impl Into<String>,
        residual: f64,
        tol: f64,
    ) -> Self {
        // NaN compares false and therefore fails.
        let passed = residual < tol;
        Check {
            name: name.into(),
            reference: reference.into(),
            residual,
            tol,
            expect: Expect::Below,
            passed,
        }
    }

    /// A negative control: passes when the residual is at least `floor`.
    pub fn above(
        name: impl Into<String>,
        reference: impl Into<String>,
        residual: f64,
        floor: f64,
    ) -> Self {
        let passed = residual >= floor;
        Check {
            name: name.into(),
            reference: reference.into(),
            residual,
            tol: floor,
            expect: Expect::Above,
            passed,
        }
    }

    /// Re-evaluates the pass flag against a different threshold. Negative
    /// controls keep their floor.
    pub fn with_tol(mut self, tol: f64) -> Self {
        if self.expect == Expect::Below {
            self.tol = tol;
            self.passed = self.residual < tol;
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub seed: u64,
    #[serde(skip)]
    pub n_samples: usize,
}

impl IdentityReport {
    pub fn new(suite: impl Into<String>, seed: u64, n_samples: usize) -> Self {
        IdentityReport {
            suite: suite.into(),
            checks: Vec::new(),
            seed,
            n_samples,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: IdentityReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} (seed {}, {} samples)",
            self.suite, self.seed, self.n_samples
        )?;
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            let rel = match c.expect {
                Expect::Below => "<",
                Expect::Above => ">=",
            };
            writeln!(
                f,
                "  [{verdict}] {:<56} residual {:>10.3e} {rel} {:.0e}   {}",
                c.name, c.residual, c.tol, c.reference
            )?;
        }
        Ok(())
    }
}
