//! Named residuals with pass/fail verdicts — the universal output of every check.

/// Default absolute tolerance for residual verdicts.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A single named residual with its verdict.
///
/// Advisory items are informational (hypothesis tests, warnings); they never
/// flip the aggregate verdict of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckItem {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
    pub witness: Option<String>,
    pub advisory: bool,
}

/// An ordered list of checks evaluated against one tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub tolerance: f64,
    pub checks: Vec<CheckItem>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(tolerance: f64) -> Self {
        CheckReport {
            tolerance,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Append a binding check; `pass` is derived from the residual.
    pub fn push(&mut self, name: impl Into<String>, residual: f64) {
        self.push_item(name, residual, None, false);
    }

    pub fn push_with_witness(
        &mut self,
        name: impl Into<String>,
        residual: f64,
        witness: impl Into<String>,
    ) {
        self.push_item(name, residual, Some(witness.into()), false);
    }

    pub fn push_advisory(
        &mut self,
        name: impl Into<String>,
        residual: f64,
        witness: Option<String>,
    ) {
        self.push_item(name, residual, witness, true);
    }

    pub fn push_item(
        &mut self,
        name: impl Into<String>,
        residual: f64,
        witness: Option<String>,
        advisory: bool,
    ) {
        let pass = residual <= self.tolerance;
        self.checks.push(CheckItem {
            name: name.into(),
            residual,
            pass,
            witness,
            advisory,
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// True when every non-advisory check passes.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.advisory || c.pass)
    }

    /// Largest residual among non-advisory checks (0 when there are none).
    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| !c.advisory)
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }

    pub fn find(&self, name: &str) -> Option<&CheckItem> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Move every check from `other` into this report, keeping order.
    pub fn absorb(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_follows_tolerance() {
        let mut r = CheckReport::new(1e-9);
        r.push("a", 0.0);
        r.push("b", 1e-9);
        r.push("c", 2e-9);
        assert!(r.checks[0].pass);
        assert!(r.checks[1].pass);
        assert!(!r.checks[2].pass);
        assert!(!r.all_pass());
        assert_eq!(r.max_residual(), 2e-9);
    }

    #[test]
    fn advisory_does_not_block_aggregate() {
        let mut r = CheckReport::new(1e-9);
        r.push("a", 0.0);
        r.push_advisory("warn", 1.0, None);
        assert!(!r.checks[1].pass);
        assert!(r.all_pass());
    }
}
