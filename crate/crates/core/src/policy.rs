use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::taxonomy::{normalize, AcademicGrade};

/// Tunable institutional rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Policy {
    /// Length of a grade appointment.
    pub term_years: u32,
    /// How long before expiry the renewal procedure must be initiated.
    pub warning_months: u32,
    /// Smallest allowed expert committee.
    pub committee_min: usize,
    /// Whether the committee must have an odd number of members.
    pub committee_odd: bool,
    /// Grade names whose appointments never expire.
    pub non_expiring_grades: Vec<String>,
}

impl Default for Policy {
    fn default() -> Self {
        Self {
            term_years: 5,
            warning_months: 3,
            committee_min: 3,
            committee_odd: true,
            non_expiring_grades: vec!["professor emeritus".to_string()],
        }
    }
}

impl Policy {
    pub fn validate(&self) -> Result<()> {
        if self.term_years < 1 {
            return Err(Error::Validation("term_years must be at least 1".into()));
        }
        if self.warning_months < 1 {
            return Err(Error::Validation(
                "warning_months must be at least 1".into(),
            ));
        }
        if self.committee_min < 1 || (self.committee_odd && self.committee_min.is_multiple_of(2)) {
            return Err(Error::Validation(
                "committee_min must be odd and at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn is_non_expiring(&self, grade: &AcademicGrade) -> bool {
        self.non_expiring_grades
            .iter()
            .any(|g| normalize(g) == grade.name())
    }

    pub fn committee_size_ok(&self, size: usize) -> bool {
        size >= self.committee_min && (!self.committee_odd || size % 2 == 1)
    }
}
