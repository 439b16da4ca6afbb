use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `residual <= tolerance`
    AtMost,
    /// `residual >= tolerance`: the value must be bounded away from zero.
    AtLeast,
    /// A yes/no property; `residual` is 0 when it holds and 1 otherwise.
    Holds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The identity or property being checked.
    pub reference: String,
    pub comparison: Comparison,
    /// `null` when the computed value is not finite.
    #[serde(with = "finite")]
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// The printed form of this table cell disagrees with the ladder algebra;
    /// the consistent form is the one verified.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub printed_form_inconsistent: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

mod finite {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub flagged: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary_line(&self) -> String {
        let s = &self.summary;
        format!(
            "{}: {} checks, {} passed, {} failed, {} flagged",
            self.command, s.total, s.passed, s.failed, s.flagged
        )
    }
}

/// Collects checks in execution order.
#[derive(Debug, Default)]
pub struct Recorder {
    checks: Vec<CheckRecord>,
    prefix: String,
}

impl Recorder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Prefix prepended (with a dot) to subsequent ids.
    pub fn set_prefix(&mut self, prefix: &str) {
        self.prefix = prefix.to_string();
    }

    fn full_id(&self, id: &str) -> String {
        if self.prefix.is_empty() {
            id.to_string()
        } else {
            format!("{}.{id}", self.prefix)
        }
    }

    fn push(
        &mut self,
        id: &str,
        reference: &str,
        comparison: Comparison,
        residual: f64,
        tolerance: f64,
    ) -> &mut CheckRecord {
        let pass = residual.is_finite()
            && match comparison {
                Comparison::AtMost => residual <= tolerance,
                Comparison::AtLeast => residual >= tolerance,
                Comparison::Holds => residual == 0.0,
            };
        let record = CheckRecord {
            id: self.full_id(id),
            reference: reference.to_string(),
            comparison,
            residual,
            tolerance,
            pass,
            printed_form_inconsistent: false,
            detail: None,
        };
        self.checks.push(record);
        self.checks.last_mut().expect("just pushed")
    }

    pub fn at_most(
        &mut self,
        id: &str,
        reference: &str,
        residual: f64,
        tolerance: f64,
    ) -> &mut CheckRecord {
        self.push(id, reference, Comparison::AtMost, residual, tolerance)
    }

    pub fn at_least(
        &mut self,
        id: &str,
        reference: &str,
        value: f64,
        bound: f64,
    ) -> &mut CheckRecord {
        self.push(id, reference, Comparison::AtLeast, value, bound)
    }

    pub fn holds(&mut self, id: &str, reference: &str, ok: bool) -> &mut CheckRecord {
        self.push(
            id,
            reference,
            Comparison::Holds,
            if ok { 0.0 } else { 1.0 },
            0.0,
        )
    }

    /// Records a computation that could not finish as a failed check.
    pub fn error(&mut self, id: &str, err: &dyn std::fmt::Display) {
        let msg = err.to_string();
        self.holds(id, "suite completed", false).detail = Some(msg);
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn finish(self, command: &str, config: &RunConfig) -> VerificationReport {
        let mut seen = HashSet::new();
        for c in &self.checks {
            assert!(seen.insert(c.id.as_str()), "duplicate check id {}", c.id);
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let summary = Summary {
            total: self.checks.len(),
            passed,
            failed: self.checks.len() - passed,
            flagged: self
                .checks
                .iter()
                .filter(|c| c.printed_form_inconsistent)
                .count(),
        };
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            tool: "ecsusy".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: config.clone(),
            checks: self.checks,
            summary,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        let mut r = Recorder::new();
        r.at_most("a", "", 1e-12, 1e-10);
        r.at_most("b", "", f64::NAN, 1e-10);
        r.at_least("c", "", 1e-3, 1e-4);
        r.at_least("d", "", 0.0, 1e-4);
        r.holds("e", "", true);
        r.holds("f", "", false).printed_form_inconsistent = true;
        let rep = r.finish("test", &RunConfig::default());
        let pass: Vec<bool> = rep.checks.iter().map(|c| c.pass).collect();
        assert_eq!(pass, [true, false, true, false, true, false]);
        assert_eq!(rep.summary.total, rep.summary.passed + rep.summary.failed);
        assert_eq!(rep.summary.flagged, 1);
        assert_eq!(rep.exit_code(), 1);
    }

    #[test]
    fn json_round_trip_keeps_non_finite_as_null() {
        let mut r = Recorder::new();
        r.set_prefix("s");
        r.at_most("x", "ref", f64::INFINITY, 1.0);
        let rep = r.finish("test", &RunConfig::default());
        let text = rep.to_json();
        assert!(text.contains("\"residual\": null"));
        assert!(text.contains("\"id\": \"s.x\""));
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert!(back.checks[0].residual.is_nan());
    }

    #[test]
    #[should_panic(expected = "duplicate")]
    fn ids_are_unique() {
        let mut r = Recorder::new();
        r.holds("x", "", true);
        r.holds("x", "", true);
        r.finish("test", &RunConfig::default());
    }
}
