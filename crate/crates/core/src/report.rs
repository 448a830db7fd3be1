//! Check records shared by the verification suites and the CLI.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    /// Largest residual seen, `0` for exact checks.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn exact(name: impl Into<String>, anchor: &str, ok: bool) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: if ok { 0.0 } else { 1.0 },
            detail: None,
        }
    }

    pub fn residual(name: impl Into<String>, anchor: &str, residual: f64, tol: f64) -> Self {
        let ok = residual <= tol;
        Check {
            name: name.into(),
            anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual,
            detail: None,
        }
    }

    pub fn skipped(name: impl Into<String>, anchor: &str, why: impl Into<String>) -> Self {
        Check { name: name.into(), anchor: anchor.into(), status: Status::Skip, residual: 0.0, detail: Some(why.into()) }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Skips count as not failing.
    pub fn ok(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Top-level report written by every command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }
}

/// Merges instances of the same check, keeping the worst residual.
pub fn worst_by_name(checks: Vec<Check>) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for c in checks {
        match out.iter_mut().find(|o| o.name == c.name && o.anchor == c.anchor) {
            Some(o) => {
                o.residual = o.residual.max(c.residual);
                if c.status == Status::Fail && o.status != Status::Fail {
                    o.status = Status::Fail;
                    o.detail = c.detail;
                } else if c.status == Status::Pass && o.status == Status::Skip {
                    o.status = Status::Pass;
                }
            }
            None => out.push(c),
        }
    }
    out
}
