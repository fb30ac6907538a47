//! Certificate reports: a named claim, its parameters, and a list of
//! expected/observed checks whose conjunction is the verdict.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::ff::{Field, FieldElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Infeasible,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Infeasible => "infeasible",
        })
    }
}

impl Verdict {
    /// Process exit code: 0 pass, 1 fail, 2 infeasible.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Infeasible => 2,
        }
    }

    /// Combined verdict of several reports: any failure wins, then any
    /// infeasibility.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Pass;
        for v in verdicts {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Infeasible => out = Verdict::Infeasible,
                Verdict::Pass => {}
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub ok: bool,
    /// Failed because the computation was out of reach or a hypothesis did
    /// not hold, not because a claim was refuted.
    #[serde(skip)]
    pub infeasible: bool,
}

impl Check {
    /// Passes iff the rendered values agree.
    pub fn equal(name: impl Into<String>, expected: impl fmt::Display, observed: impl fmt::Display) -> Self {
        let (expected, observed) = (expected.to_string(), observed.to_string());
        let ok = expected == observed;
        Check { name: name.into(), expected, observed, ok, infeasible: false }
    }

    pub fn new(name: impl Into<String>, expected: impl Into<String>, observed: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), expected: expected.into(), observed: observed.into(), ok, infeasible: false }
    }

    pub fn infeasible(name: impl Into<String>, expected: impl Into<String>, reason: impl Into<String>) -> Self {
        Check { name: name.into(), expected: expected.into(), observed: reason.into(), ok: false, infeasible: true }
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}: {}", self.name);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Params {
    pub p: u64,
    pub a: u32,
    pub modulus: Vec<u64>,
    /// Coefficients of `t`, constant term first.
    pub t: Option<Vec<u64>>,
}

impl Params {
    pub fn new(field: &Field, t: Option<&FieldElement>) -> Self {
        Params { p: field.p(), a: field.a(), modulus: field.modulus().to_vec(), t: t.map(|t| t.coeffs()) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EngineFlags {
    pub guard: u64,
    pub randomized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub claim: String,
    pub params: Params,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
    pub engine: EngineFlags,
}

impl CertificateReport {
    pub fn new(claim: &str, params: Params, checks: Vec<Check>, started: Instant, engine: EngineFlags) -> Self {
        let verdict = verdict_of(&checks);
        CertificateReport {
            claim: claim.to_string(),
            params,
            verdict,
            checks,
            elapsed_ms: started.elapsed().as_millis() as u64,
            engine,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Pass iff every check is ok; infeasible if all failures are infeasible.
pub fn verdict_of(checks: &[Check]) -> Verdict {
    if checks.iter().all(|c| c.ok) {
        Verdict::Pass
    } else if checks.iter().all(|c| c.ok || c.infeasible) {
        Verdict::Infeasible
    } else {
        Verdict::Fail
    }
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match &self.params.t {
            Some(t) => format!("{t:?}"),
            None => "-".into(),
        };
        writeln!(
            f,
            "{}  p={} a={} modulus={:?} t={}",
            self.claim, self.params.p, self.params.a, self.params.modulus, t
        )?;
        for c in &self.checks {
            let tag = match (c.ok, c.infeasible) {
                (true, _) => "ok  ",
                (false, true) => "n/a ",
                (false, false) => "FAIL",
            };
            if c.expected == c.observed {
                writeln!(f, "  [{tag}] {}: {}", c.name, c.observed)?;
            } else {
                writeln!(f, "  [{tag}] {}: expected {}, observed {}", c.name, c.expected, c.observed)?;
            }
        }
        write!(
            f,
            "verdict: {}  ({} ms, guard {}, randomized {})",
            self.verdict, self.elapsed_ms, self.engine.guard, self.engine.randomized
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rules() {
        let ok = Check::equal("a", 1, 1);
        let bad = Check::equal("b", 1, 2);
        let na = Check::infeasible("c", "x", "too large");
        assert_eq!(verdict_of(std::slice::from_ref(&ok)), Verdict::Pass);
        assert_eq!(verdict_of(&[ok.clone(), na.clone()]), Verdict::Infeasible);
        assert_eq!(verdict_of(&[ok, na, bad]), Verdict::Fail);
        assert_eq!(Verdict::combine([Verdict::Pass, Verdict::Infeasible]), Verdict::Infeasible);
        assert_eq!(Verdict::combine([Verdict::Infeasible, Verdict::Fail]), Verdict::Fail);
    }

    #[test]
    fn json_omits_internal_flag() {
        let json = serde_json::to_value(Check::infeasible("c", "x", "y")).unwrap();
        assert_eq!(json.as_object().unwrap().len(), 4);
        assert_eq!(json["ok"], false);
    }
}
