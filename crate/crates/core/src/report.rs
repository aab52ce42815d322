//! Pass/fail reports shared by the verification layers.

use serde::Serialize;

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One identity, its status and the first failing basis elements.
#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub property: String,
    pub status: Status,
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn pass(property: impl Into<String>) -> Self {
        Self {
            property: property.into(),
            status: Status::Pass,
            witnesses: Vec::new(),
        }
    }

    pub fn fail(property: impl Into<String>, witness: impl Into<String>) -> Self {
        Self {
            property: property.into(),
            status: Status::Fail,
            witnesses: vec![witness.into()],
        }
    }

    /// `Ok(None)` passes, `Ok(Some(w))` fails with witness `w`, errors fail.
    pub fn from_outcome<E: std::fmt::Display>(
        property: impl Into<String>,
        outcome: std::result::Result<Option<String>, E>,
    ) -> Self {
        match outcome {
            Ok(None) => Self::pass(property),
            Ok(Some(w)) => Self::fail(property, w),
            Err(e) => Self::fail(property, e.to_string()),
        }
    }

    /// `None` passes, `Some(w)` fails with witness `w`.
    pub fn verdict(property: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Self::pass(property),
            Some(w) => Self::fail(property, w),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq, Default)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Append `other`'s checks with their names prefixed.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.property = format!("{prefix}/{}", c.property);
            self.checks.push(c);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}
