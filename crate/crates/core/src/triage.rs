//! Requirements ledger with FURPS+ categories and MoSCoW priorities.

use std::fmt;
use std::io;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{RequirementId, Sequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RequirementKind {
    Functional,
    NonFunctional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FurpsCategory {
    Functionality,
    Usability,
    Reliability,
    Performance,
    Supportability,
    Implementation,
    Interfaces,
    Operations,
    Packaging,
    Licensing,
}

impl FurpsCategory {
    pub const ALL: [FurpsCategory; 10] = [
        FurpsCategory::Functionality,
        FurpsCategory::Usability,
        FurpsCategory::Reliability,
        FurpsCategory::Performance,
        FurpsCategory::Supportability,
        FurpsCategory::Implementation,
        FurpsCategory::Interfaces,
        FurpsCategory::Operations,
        FurpsCategory::Packaging,
        FurpsCategory::Licensing,
    ];

    /// Only functionality requirements are functional; the rest constrain.
    pub fn kind(self) -> RequirementKind {
        match self {
            FurpsCategory::Functionality => RequirementKind::Functional,
            _ => RequirementKind::NonFunctional,
        }
    }
}

impl FromStr for FurpsCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_lowercase();
        FurpsCategory::ALL
            .into_iter()
            .find(|c| c.to_string().to_lowercase() == wanted)
            .ok_or_else(|| Error::Validation(format!("unknown FURPS+ category {s:?}")))
    }
}

impl fmt::Display for FurpsCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// MoSCoW priority. The derived order is the backlog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Priority {
    M,
    S,
    C,
    W,
}

impl Priority {
    pub const ALL: [Priority; 4] = [Priority::M, Priority::S, Priority::C, Priority::W];

    pub fn label(self) -> &'static str {
        match self {
            Priority::M => "Must Have",
            Priority::S => "Should Have",
            Priority::C => "Could Have",
            Priority::W => "Won't Have This Time Around",
        }
    }
}

impl FromStr for Priority {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "M" | "m" => Ok(Priority::M),
            "S" | "s" => Ok(Priority::S),
            "C" | "c" => Ok(Priority::C),
            "W" | "w" => Ok(Priority::W),
            other => Err(Error::Validation(format!(
                "priority must be one of M, S, C, W, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Priority {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Requirement {
    pub requirement_id: RequirementId,
    pub text: String,
    pub kind: RequirementKind,
    pub category: FurpsCategory,
    pub priority: Priority,
    pub created_at: DateTime<Utc>,
}

/// Stable sort by priority: all M, then S, C and W, each class in input order.
pub fn prioritized_backlog(requirements: &[Requirement]) -> Vec<Requirement> {
    let mut out = requirements.to_vec();
    out.sort_by_key(|r| r.priority);
    out
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RequirementLedger {
    requirements: Vec<Requirement>,
    seq: Sequence,
}

impl RequirementLedger {
    pub fn add(
        &mut self,
        text: &str,
        category: &str,
        priority: &str,
        now: DateTime<Utc>,
    ) -> Result<Requirement> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Validation(
                "requirement text must not be empty".into(),
            ));
        }
        let category: FurpsCategory = category.parse()?;
        let priority: Priority = priority.parse()?;
        let requirement = Requirement {
            requirement_id: RequirementId(self.seq.next()),
            text: text.to_string(),
            kind: category.kind(),
            category,
            priority,
            created_at: now,
        };
        self.requirements.push(requirement.clone());
        Ok(requirement)
    }

    /// In insertion order.
    pub fn all(&self) -> &[Requirement] {
        &self.requirements
    }

    pub fn backlog(&self) -> Vec<Requirement> {
        prioritized_backlog(&self.requirements)
    }

    /// Imports `id,category,priority,text` rows. Ids in the file are ignored
    /// and fresh ones assigned. Stops at the first bad row and reports its
    /// line; earlier rows stay imported.
    pub fn import_csv<R: io::Read>(
        &mut self,
        input: R,
        now: DateTime<Utc>,
    ) -> Result<Vec<Requirement>> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut added = Vec::new();
        for row in reader.records() {
            let row = row.map_err(|e| Error::Validation(format!("requirements csv: {e}")))?;
            let line = row.position().map_or(0, |p| p.line());
            let field = |i: usize| row.get(i).unwrap_or("");
            let req = self
                .add(field(3), field(1), field(2), now)
                .map_err(|e| Error::Validation(format!("line {line}: {e}")))?;
            added.push(req);
        }
        Ok(added)
    }
}

pub fn export_csv<W: io::Write>(requirements: &[Requirement], out: W) -> Result<()> {
    let err = |e: csv::Error| Error::Validation(format!("csv output: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "category", "priority", "text"])
        .map_err(err)?;
    for r in requirements {
        w.write_record([
            r.requirement_id.0.to_string(),
            r.category.to_string(),
            r.priority.to_string(),
            r.text.clone(),
        ])
        .map_err(err)?;
    }
    w.flush()
        .map_err(|e| Error::Validation(format!("csv output: {e}")))
}

/// Plain-text backlog grouped under M, S, C, W headings.
pub fn render_grouped(requirements: &[Requirement]) -> String {
    let backlog = prioritized_backlog(requirements);
    let mut out = String::new();
    for priority in Priority::ALL {
        out.push_str(&format!("[{priority}] {}\n", priority.label()));
        for r in backlog.iter().filter(|r| r.priority == priority) {
            out.push_str(&format!(
                "  {} ({}) {}\n",
                r.requirement_id, r.category, r.text
            ));
        }
    }
    out
}
