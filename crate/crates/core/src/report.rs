//! Named residuals with tolerances and verdicts.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Which side of the tolerance passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `residual <= tolerance`
    #[default]
    AtMost,
    /// `residual > tolerance`, used by negative controls.
    Exceeds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub id: String,
    pub residual: f64,
    pub tolerance: f64,
    #[serde(default)]
    pub comparison: Comparison,
    pub passed: bool,
}

impl CheckEntry {
    pub fn new(id: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self::with_comparison(id, residual, tolerance, Comparison::AtMost)
    }

    pub fn exceeds(id: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self::with_comparison(id, residual, tolerance, Comparison::Exceeds)
    }

    pub fn with_comparison(id: impl Into<String>, residual: f64, tolerance: f64, comparison: Comparison) -> Self {
        // NaN never passes.
        let passed = match comparison {
            Comparison::AtMost => residual <= tolerance,
            Comparison::Exceeds => residual > tolerance,
        };
        Self {
            id: id.into(),
            residual,
            tolerance,
            comparison,
            passed,
        }
    }

    /// A boolean condition, recorded as residual 0 (holds) or 1 (fails).
    pub fn condition(id: impl Into<String>, holds: bool) -> Self {
        Self::new(id, if holds { 0.0 } else { 1.0 }, 0.0)
    }
}

impl fmt::Display for CheckEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.comparison {
            Comparison::AtMost => "<=",
            Comparison::Exceeds => ">",
        };
        write!(
            f,
            "{} {}: {:.3e} {} {:.1e}",
            if self.passed { "ok  " } else { "FAIL" },
            self.id,
            self.residual,
            op,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub entries: Vec<CheckEntry>,
    pub metadata: BTreeMap<String, Value>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, e: CheckEntry) {
        self.entries.push(e);
    }

    pub fn check(&mut self, id: impl Into<String>, residual: f64, tolerance: f64) {
        self.push(CheckEntry::new(id, residual, tolerance));
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata.insert(key.to_owned(), value.into());
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn counts(&self) -> (usize, usize) {
        let ok = self.entries.iter().filter(|e| e.passed).count();
        (ok, self.entries.len() - ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn get(&self, id: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (ok, bad) = self.counts();
        writeln!(f, "{}: {ok} passed, {bad} failed", self.name)?;
        for e in &self.entries {
            writeln!(f, "  {e}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Running maximum of a residual family, remembering where it occurred.
#[derive(Debug, Clone, Default)]
pub struct MaxTracker {
    pub value: f64,
    pub at: Option<String>,
    pub count: usize,
}

impl MaxTracker {
    pub fn observe(&mut self, v: f64, at: impl FnOnce() -> String) {
        self.count += 1;
        // NaN must surface as a failure, so it always wins and then sticks.
        if self.value.is_nan() {
            return;
        }
        if v.is_nan() || v > self.value || self.at.is_none() {
            self.value = v;
            self.at = Some(at());
        }
    }
}
