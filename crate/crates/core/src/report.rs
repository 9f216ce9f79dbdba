use serde::{Deserialize, Serialize};

/// A single violated identity or failed clause, with the witnessing data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Name of the identity or clause that failed, e.g. `"d_i d_j = d_{j-1} d_i"`.
    pub rule: String,
    /// Where it failed: cell, multi-index, horn, direction, ...
    pub witness: String,
}

impl Violation {
    pub fn new(rule: impl Into<String>, witness: impl Into<String>) -> Self {
        Violation {
            rule: rule.into(),
            witness: witness.into(),
        }
    }
}

/// Outcome of a report-style check: a list of violations, empty iff the
/// checked property holds on the supplied data.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub violations: Vec<Violation>,
    /// Per-clause outcomes for structured checks (clause name, pass).
    pub clauses: Vec<(String, bool)>,
    /// Free-form notes, e.g. the truncation bound a Kan check was run at.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report {
            check: check.into(),
            ..Report::default()
        }
    }

    pub fn is_pass(&self) -> bool {
        self.violations.is_empty() && self.clauses.iter().all(|(_, ok)| *ok)
    }

    pub fn violation(&mut self, rule: impl Into<String>, witness: impl Into<String>) {
        self.violations.push(Violation::new(rule, witness));
    }

    pub fn clause(&mut self, name: impl Into<String>, pass: bool) {
        self.clauses.push((name.into(), pass));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Fold a sub-report in as a named clause, keeping its violations.
    pub fn absorb(&mut self, name: impl Into<String>, sub: Report) {
        let pass = sub.is_pass();
        self.clauses.push((name.into(), pass));
        self.violations.extend(sub.violations);
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.check,
            if self.is_pass() { "pass" } else { "FAIL" }
        )?;
        for (name, ok) in &self.clauses {
            writeln!(f, "  [{}] {}", if *ok { "ok" } else { "XX" }, name)?;
        }
        for v in &self.violations {
            writeln!(f, "  violated {} at {}", v.rule, v.witness)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
