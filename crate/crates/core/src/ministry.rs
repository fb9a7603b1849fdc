//! Wire format and client contract for the ministry that keeps the
//! Register of Researchers, plus an in-process stub.
//!
//! The ministry is asynchronous. An application is submitted once and
//! acknowledged with a token. The decision shows up later and is fetched by
//! polling.

use std::collections::BTreeMap;
use std::sync::Mutex;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::ApplicationId;
use crate::people::Person;
use crate::registry::{MinistryDecision, RegistryApplication, RegistryCategory};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinistryPerson {
    pub name: String,
    pub date_of_birth: NaiveDate,
}

/// Request body of `POST /applications`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinistrySubmission {
    pub application_id: ApplicationId,
    pub person: MinistryPerson,
    pub category: RegistryCategory,
    pub documents: Vec<String>,
}

impl MinistrySubmission {
    pub fn new(application: &RegistryApplication, person: &Person) -> Self {
        Self {
            application_id: application.application_id,
            person: MinistryPerson {
                name: person.full_name.clone(),
                date_of_birth: person.date_of_birth,
            },
            category: application.category,
            documents: application.documents.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Acknowledgment {
    pub ack: String,
}

/// Response body of `GET /applications/{id}/decision`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum DecisionPoll {
    Pending,
    Approved { scientist_id: String },
    Rejected { reason: String },
}

impl DecisionPoll {
    pub fn into_decision(self) -> Option<MinistryDecision> {
        match self {
            DecisionPoll::Pending => None,
            DecisionPoll::Approved { scientist_id } => {
                Some(MinistryDecision::Approved { scientist_id })
            }
            DecisionPoll::Rejected { reason } => Some(MinistryDecision::Rejected { reason }),
        }
    }
}

impl From<MinistryDecision> for DecisionPoll {
    fn from(d: MinistryDecision) -> Self {
        match d {
            MinistryDecision::Approved { scientist_id } => DecisionPoll::Approved { scientist_id },
            MinistryDecision::Rejected { reason } => DecisionPoll::Rejected { reason },
        }
    }
}

/// Transport failures map to [`Error::Transport`] and are retryable;
/// unparseable answers map to [`Error::Protocol`].
pub trait MinistryClient: Send + Sync {
    fn submit(&self, submission: &MinistrySubmission) -> Result<Acknowledgment>;
    fn poll_decision(&self, application: ApplicationId) -> Result<DecisionPoll>;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureMode {
    #[default]
    Healthy,
    DropConnection,
    Malformed,
}

#[derive(Debug, Default)]
struct StubState {
    mode: FailureMode,
    received: BTreeMap<ApplicationId, MinistrySubmission>,
    decisions: BTreeMap<ApplicationId, MinistryDecision>,
    submit_calls: usize,
}

/// Ministry stand-in. Acknowledges each application id once, remembering
/// it, and answers polls with whatever decision a test has queued.
#[derive(Debug, Default)]
pub struct StubMinistry {
    state: Mutex<StubState>,
}

impl StubMinistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn mode(&self) -> FailureMode {
        self.state.lock().unwrap().mode
    }

    pub fn set_mode(&self, mode: FailureMode) {
        self.state.lock().unwrap().mode = mode;
    }

    /// Stores the submission and returns its token. Repeats of the same
    /// application id return the same token without storing anything new.
    pub fn receive(&self, submission: &MinistrySubmission) -> Acknowledgment {
        let mut state = self.state.lock().unwrap();
        state.submit_calls += 1;
        state
            .received
            .entry(submission.application_id)
            .or_insert_with(|| submission.clone());
        Acknowledgment {
            ack: format!("ACK-{}", submission.application_id.0),
        }
    }

    pub fn decide(&self, application: ApplicationId, decision: MinistryDecision) {
        self.state
            .lock()
            .unwrap()
            .decisions
            .insert(application, decision);
    }

    pub fn decision(&self, application: ApplicationId) -> DecisionPoll {
        self.state
            .lock()
            .unwrap()
            .decisions
            .get(&application)
            .cloned()
            .map_or(DecisionPoll::Pending, DecisionPoll::from)
    }

    pub fn received(&self) -> Vec<MinistrySubmission> {
        self.state
            .lock()
            .unwrap()
            .received
            .values()
            .cloned()
            .collect()
    }

    pub fn submit_calls(&self) -> usize {
        self.state.lock().unwrap().submit_calls
    }

    fn fault(&self) -> Result<()> {
        match self.mode() {
            FailureMode::Healthy => Ok(()),
            FailureMode::DropConnection => Err(Error::Transport(
                "connection dropped by ministry stub".into(),
            )),
            FailureMode::Malformed => Err(Error::Protocol(
                "malformed response from ministry stub".into(),
            )),
        }
    }
}

impl MinistryClient for StubMinistry {
    fn submit(&self, submission: &MinistrySubmission) -> Result<Acknowledgment> {
        self.fault()?;
        Ok(self.receive(submission))
    }

    fn poll_decision(&self, application: ApplicationId) -> Result<DecisionPoll> {
        self.fault()?;
        Ok(self.decision(application))
    }
}
