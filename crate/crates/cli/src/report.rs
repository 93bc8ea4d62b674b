use serde::Serialize;
use serde_json::Value;

use twistorlab_core::legendrian::LEGENDRIAN_SPIN;
use twistorlab_core::report::CheckReport;

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub reports: usize,
    pub entries: usize,
    pub passed: usize,
    pub failed: usize,
    pub verdict: &'static str,
}

/// The spin convention every spin-sign verdict is measured against.
#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub legendrian_spin: String,
    pub measured_on: &'static str,
}

impl Default for Calibration {
    fn default() -> Self {
        Self {
            legendrian_spin: LEGENDRIAN_SPIN.to_string(),
            measured_on: "cubic reference curve [1 : -t^3/3 : t : t^2]",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub reports: Vec<CheckReport>,
    pub summary: Summary,
    pub calibration: Calibration,
}

impl ReportDocument {
    pub fn new(command: &'static str, config: Value, reports: Vec<CheckReport>) -> Self {
        let entries = reports.iter().map(|r| r.entries.len()).sum();
        let passed = reports.iter().map(|r| r.counts().0).sum();
        let failed = entries - passed;
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            summary: Summary {
                reports: reports.len(),
                entries,
                passed,
                failed,
                verdict: if failed == 0 { "pass" } else { "fail" },
            },
            reports,
            calibration: Calibration::default(),
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use twistorlab_core::report::CheckEntry;

    #[test]
    fn summary_counts_entries() {
        let mut a = CheckReport::new("a");
        a.push(CheckEntry::new("x", 0.0, 1.0));
        a.push(CheckEntry::new("y", 2.0, 1.0));
        let mut b = CheckReport::new("b");
        b.push(CheckEntry::exceeds("z", 2.0, 1.0));
        let doc = ReportDocument::new("test", Value::Null, vec![a, b]);
        assert_eq!((doc.summary.entries, doc.summary.passed, doc.summary.failed), (3, 2, 1));
        assert!(!doc.passed());
        assert_eq!(doc.calibration.legendrian_spin, "+");
    }
}
