//! Structured pass/fail records for named checks.
//!
//! Reports are deterministic given the scenario and budgets; a failing
//! check always carries a witness. Polynomial witnesses are serialized in
//! the expression grammar so they can be fed back to the parser.

use serde::Serialize;

use crate::derivation::DerivationError;
use crate::expr::ExprError;
use crate::ideal::EngineError;
use crate::poly::PolyError;
use crate::scheme::SchemeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "error")]
    Error,
    #[serde(rename = "exceeded-bounds")]
    ExceededBounds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    /// wall time; excluded from determinism comparisons
    pub ms: u128,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("{0}")]
    Other(String),
}

impl CheckError {
    pub fn is_budget(&self) -> bool {
        match self {
            CheckError::Engine(e) => e.is_budget(),
            CheckError::Scheme(SchemeError::Engine(e)) => e.is_budget(),
            CheckError::Derivation(d) => d.is_budget(),
            _ => false,
        }
    }
}

/// Accumulates named sub-checks into one [`Report`].
pub struct Checker {
    name: String,
    witnesses: Vec<Witness>,
    failed: bool,
}

impl Checker {
    /// Run `body`, folding sub-check outcomes and errors into a report.
    pub fn run(name: &str, body: impl FnOnce(&mut Checker) -> Result<(), CheckError>) -> Report {
        let mut c = Checker {
            name: name.to_string(),
            witnesses: Vec::new(),
            failed: false,
        };
        let status = match body(&mut c) {
            Ok(()) if c.failed => Status::Fail,
            Ok(()) => Status::Pass,
            Err(e) => {
                let status = if e.is_budget() {
                    Status::ExceededBounds
                } else {
                    Status::Error
                };
                c.witnesses.push(Witness {
                    label: "error".into(),
                    value: e.to_string(),
                });
                status
            }
        };
        Report {
            check: c.name,
            status,
            witnesses: c.witnesses,
            ms: 0,
        }
    }

    /// Record a sub-check; on failure the report fails with this witness.
    pub fn require(&mut self, label: &str, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.failed = true;
            self.witnesses.push(Witness {
                label: format!("failed: {label}"),
                value: witness(),
            });
        }
    }

    /// Attach an informational witness (a certificate, a degree table).
    pub fn witness(&mut self, label: &str, value: impl Into<String>) {
        self.witnesses.push(Witness {
            label: label.to_string(),
            value: value.into(),
        });
    }

    pub fn has_failed(&self) -> bool {
        self.failed
    }
}

/// Merge sub-reports into an aggregate (worst status wins, witnesses are
/// prefixed with the sub-check name).
pub fn merge(name: &str, parts: Vec<Report>) -> Report {
    let mut status = Status::Pass;
    let mut witnesses = Vec::new();
    for p in parts {
        let rank = |s: Status| match s {
            Status::Pass => 0,
            Status::ExceededBounds => 1,
            Status::Fail => 2,
            Status::Error => 3,
        };
        if rank(p.status) > rank(status) {
            status = p.status;
        }
        for w in p.witnesses {
            witnesses.push(Witness {
                label: format!("{}: {}", p.check, w.label),
                value: w.value,
            });
        }
    }
    Report {
        check: name.to_string(),
        status,
        witnesses,
        ms: 0,
    }
}
