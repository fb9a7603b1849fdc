//! Register of Researchers: applications toward the ministry and the
//! resulting entries with their scientist identity numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{ApplicationId, PersonId, Sequence};
use crate::people::Person;
use crate::taxonomy::{normalize, AcademicGrade, GradeTrack};

/// Categories that can be entered in the register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum RegistryCategory {
    ResearchAssociate,
    SeniorResearchAssociate,
    ResearchAdvisor,
    AssistantProfessor,
    AssociateProfessor,
    FullProfessor,
    ExternalAssistantProfessor,
    ExternalSeniorAssistantProfessor,
    DoctoralDegreeHolder,
}

impl RegistryCategory {
    pub const ALL: [RegistryCategory; 9] = [
        RegistryCategory::ResearchAssociate,
        RegistryCategory::SeniorResearchAssociate,
        RegistryCategory::ResearchAdvisor,
        RegistryCategory::AssistantProfessor,
        RegistryCategory::AssociateProfessor,
        RegistryCategory::FullProfessor,
        RegistryCategory::ExternalAssistantProfessor,
        RegistryCategory::ExternalSeniorAssistantProfessor,
        RegistryCategory::DoctoralDegreeHolder,
    ];

    pub fn canonical_name(self) -> &'static str {
        match self {
            RegistryCategory::ResearchAssociate => "research associate",
            RegistryCategory::SeniorResearchAssociate => "senior research associate",
            RegistryCategory::ResearchAdvisor => "research advisor",
            RegistryCategory::AssistantProfessor => "assistant professor",
            RegistryCategory::AssociateProfessor => "associate professor",
            RegistryCategory::FullProfessor => "full professor",
            RegistryCategory::ExternalAssistantProfessor => {
                "external associate: assistant professor"
            }
            RegistryCategory::ExternalSeniorAssistantProfessor => {
                "external associate: senior assistant professor"
            }
            RegistryCategory::DoctoralDegreeHolder => "person with doctoral degree",
        }
    }

    /// The catalog grade this category corresponds to, if any.
    pub fn grade(self) -> Option<AcademicGrade> {
        let (name, track) = match self {
            RegistryCategory::ResearchAssociate => ("research associate", GradeTrack::Scientist),
            RegistryCategory::SeniorResearchAssociate => {
                ("senior research associate", GradeTrack::Scientist)
            }
            RegistryCategory::ResearchAdvisor => ("research advisor", GradeTrack::Scientist),
            RegistryCategory::AssistantProfessor | RegistryCategory::ExternalAssistantProfessor => {
                ("assistant professor", GradeTrack::ScientificResearch)
            }
            RegistryCategory::AssociateProfessor => {
                ("associate professor", GradeTrack::ScientificResearch)
            }
            RegistryCategory::FullProfessor => ("full professor", GradeTrack::ScientificResearch),
            RegistryCategory::ExternalSeniorAssistantProfessor
            | RegistryCategory::DoctoralDegreeHolder => return None,
        };
        AcademicGrade::lookup(name, track).ok()
    }
}

impl FromStr for RegistryCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = normalize(s);
        RegistryCategory::ALL
            .into_iter()
            .find(|c| c.canonical_name() == key)
            .ok_or(Error::CategoryNotRegistrable(key))
    }
}

impl TryFrom<String> for RegistryCategory {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<RegistryCategory> for String {
    fn from(c: RegistryCategory) -> String {
        c.canonical_name().to_string()
    }
}

impl fmt::Display for RegistryCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.canonical_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ApplicationStatus {
    Submitted,
    Approved,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryApplication {
    pub application_id: ApplicationId,
    pub person_id: PersonId,
    pub category: RegistryCategory,
    pub documents: Vec<String>,
    pub status: ApplicationStatus,
    pub submitted_at: DateTime<Utc>,
    /// Acknowledgment token from the ministry once forwarded.
    pub ministry_ack: Option<String>,
    pub scientist_id: Option<String>,
    pub rejection_reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub scientist_id: String,
    pub person_id: PersonId,
    pub category: RegistryCategory,
    pub registered_at: NaiveDate,
    pub active: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinistryDecision {
    Approved { scientist_id: String },
    Rejected { reason: String },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Register {
    applications: BTreeMap<ApplicationId, RegistryApplication>,
    entries: BTreeMap<String, RegistryEntry>,
    seq: Sequence,
}

impl Register {
    pub fn application(&self, id: ApplicationId) -> Result<&RegistryApplication> {
        self.applications
            .get(&id)
            .ok_or_else(|| Error::not_found("registry application", id))
    }

    pub fn applications(&self) -> impl Iterator<Item = &RegistryApplication> {
        self.applications.values()
    }

    pub fn entries(&self) -> impl Iterator<Item = &RegistryEntry> {
        self.entries.values()
    }

    pub fn active_entry(&self, person: PersonId) -> Option<&RegistryEntry> {
        self.entries
            .values()
            .find(|e| e.person_id == person && e.active)
    }

    fn pending_application(&self, person: PersonId) -> Option<&RegistryApplication> {
        self.applications
            .values()
            .find(|a| a.person_id == person && a.status == ApplicationStatus::Submitted)
    }

    pub fn submit(
        &mut self,
        person: &Person,
        category: &str,
        documents: Vec<String>,
        now: DateTime<Utc>,
    ) -> Result<RegistryApplication> {
        let category: RegistryCategory = category.parse()?;
        if self.active_entry(person.person_id).is_some()
            || self.pending_application(person.person_id).is_some()
        {
            return Err(Error::AlreadyRegistered(person.person_id));
        }
        if category == RegistryCategory::DoctoralDegreeHolder && !person.doctoral_degree {
            return Err(Error::MissingDoctorate(person.person_id));
        }
        let application = RegistryApplication {
            application_id: ApplicationId(self.seq.next()),
            person_id: person.person_id,
            category,
            documents,
            status: ApplicationStatus::Submitted,
            submitted_at: now,
            ministry_ack: None,
            scientist_id: None,
            rejection_reason: None,
        };
        self.applications
            .insert(application.application_id, application.clone());
        Ok(application)
    }

    pub fn mark_forwarded(
        &mut self,
        id: ApplicationId,
        ack: String,
    ) -> Result<RegistryApplication> {
        let app = self
            .applications
            .get_mut(&id)
            .ok_or_else(|| Error::not_found("registry application", id))?;
        app.ministry_ack = Some(ack);
        Ok(app.clone())
    }

    pub fn record_decision(
        &mut self,
        id: ApplicationId,
        decision: MinistryDecision,
        today: NaiveDate,
    ) -> Result<RegistryApplication> {
        let app = self.application(id)?;
        if app.status != ApplicationStatus::Submitted {
            return Err(Error::AlreadyDecided(id));
        }
        if let MinistryDecision::Approved { scientist_id } = &decision {
            if scientist_id.trim().is_empty() {
                return Err(Error::Validation("scientist_id must not be empty".into()));
            }
            if self.entries.contains_key(scientist_id) {
                return Err(Error::DuplicateScientistId(scientist_id.clone()));
            }
        }
        let app = self.applications.get_mut(&id).expect("checked above");
        match decision {
            MinistryDecision::Approved { scientist_id } => {
                app.status = ApplicationStatus::Approved;
                app.scientist_id = Some(scientist_id.clone());
                self.entries.insert(
                    scientist_id.clone(),
                    RegistryEntry {
                        scientist_id,
                        person_id: app.person_id,
                        category: app.category,
                        registered_at: today,
                        active: true,
                    },
                );
            }
            MinistryDecision::Rejected { reason } => {
                app.status = ApplicationStatus::Rejected;
                app.rejection_reason = Some(reason);
            }
        }
        Ok(app.clone())
    }
}
