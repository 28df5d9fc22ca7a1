use serde::{Deserialize, Serialize};

/// Which layer of structure a report checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    Category,
    E,
    SemiLocalizing,
    Topology,
    B,
    Y,
    Presheaf,
    Pregrid,
    Grid,
    Equivalence,
    Point,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Fail,
    /// No witness was found, but one may exist outside a truncated window.
    Unverified,
}

/// One violated (or unverifiable) condition instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub condition: String,
    pub status: Status,
    pub witness: Vec<String>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub level: Level,
    pub pass: bool,
    pub findings: Vec<Finding>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn new(level: Level) -> Self {
        ValidationReport {
            level,
            pass: true,
            findings: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn fail(
        &mut self,
        condition: impl Into<String>,
        witness: Vec<String>,
        message: impl Into<String>,
    ) {
        self.push(condition.into(), Status::Fail, witness, message.into());
    }

    pub fn unverified(
        &mut self,
        condition: impl Into<String>,
        witness: Vec<String>,
        message: impl Into<String>,
    ) {
        self.push(
            condition.into(),
            Status::Unverified,
            witness,
            message.into(),
        );
    }

    fn push(&mut self, condition: String, status: Status, witness: Vec<String>, message: String) {
        self.findings.push(Finding {
            condition,
            status,
            witness,
            message,
        });
        self.pass = false;
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Appends every finding and note of `other`.
    pub fn absorb(&mut self, other: ValidationReport) {
        for f in other.findings {
            self.push(f.condition, f.status, f.witness, f.message);
        }
        self.notes.extend(other.notes);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.status == Status::Fail)
    }

    pub fn has_failures(&self) -> bool {
        self.failures().next().is_some()
    }

    /// 0 when clean, 1 when any instance failed, 3 when only unverified instances remain.
    pub fn exit_code(&self) -> i32 {
        if self.findings.is_empty() {
            0
        } else if self.has_failures() {
            1
        } else {
            3
        }
    }
}
