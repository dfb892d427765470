//! Report types shared by relation verifiers and theorem checks.

use serde::Serialize;

/// One failed relation instance, with the scalars that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub relation: String,
    pub witness: Vec<String>,
}

/// Outcome of an exhaustive relation check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub instances: u64,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn record(&mut self, relation: &str, ok: bool, witness: impl FnOnce() -> Vec<String>) {
        self.instances += 1;
        if !ok {
            self.failures.push(RelationFailure { relation: relation.to_string(), witness: witness() });
        }
    }

    pub fn merge(&mut self, other: RelationReport) {
        self.instances += other.instances;
        self.failures.extend(other.failures);
    }

    /// Does any failure concern the named relation?
    pub fn fails(&self, relation: &str) -> bool {
        self.failures.iter().any(|f| f.relation == relation)
    }

    pub fn summary(&self) -> String {
        match self.failures.first() {
            None => format!("all {} relation instances hold", self.instances),
            Some(first) => format!(
                "{} of {} relation instances failed, first: {} at ({})",
                self.failures.len(),
                self.instances,
                first.relation,
                first.witness.join(", ")
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

/// Outcome of a named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub details: Vec<String>,
}

impl CheckReport {
    pub fn pass(check: &str) -> Self {
        CheckReport { check: check.to_string(), verdict: Verdict::Pass, details: Vec::new() }
    }

    pub fn fail(check: &str, detail: impl Into<String>) -> Self {
        CheckReport { check: check.to_string(), verdict: Verdict::Fail, details: vec![detail.into()] }
    }

    pub fn not_applicable(check: &str, reason: impl Into<String>) -> Self {
        CheckReport { check: check.to_string(), verdict: Verdict::NotApplicable, details: vec![reason.into()] }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.details.push(detail.into());
        self
    }

    /// Record a failed assertion; the first failure flips the verdict.
    pub fn require(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.verdict = Verdict::Fail;
            self.details.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
