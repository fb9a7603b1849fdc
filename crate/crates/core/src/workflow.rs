//! The grade appointment procedure as an event-driven state machine.
//!
//! A procedure starts with the council's decision to initiate it. From then
//! on, each accepted event moves it along
//!
//! ```text
//! Initiated -> CommitteeSelected -> VacancyAnnounced -> AcceptingApplications*
//!   -> ApplicationsClosed -> ReportSubmitted -> BoardDecided -> SenateConfirmed
//!   -> Recognized
//! ```
//!
//! and any non-terminal procedure can be terminated with a reason. Every
//! accepted event is appended to the procedure's history together with the
//! state it produced, and bumps the version by one. Replaying the history
//! from scratch must always reproduce the stored state.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::calendar::add_years;
use crate::error::{Error, Guard, Result};
use crate::ids::{AppointmentId, PersonId, ProcedureId, Sequence};
use crate::policy::Policy;
use crate::taxonomy::AcademicGrade;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProcedureState {
    Initiated,
    CommitteeSelected,
    VacancyAnnounced,
    AcceptingApplications,
    ApplicationsClosed,
    ReportSubmitted,
    BoardDecided,
    SenateConfirmed,
    Recognized,
    Terminated,
}

impl ProcedureState {
    pub const ALL: [ProcedureState; 10] = [
        ProcedureState::Initiated,
        ProcedureState::CommitteeSelected,
        ProcedureState::VacancyAnnounced,
        ProcedureState::AcceptingApplications,
        ProcedureState::ApplicationsClosed,
        ProcedureState::ReportSubmitted,
        ProcedureState::BoardDecided,
        ProcedureState::SenateConfirmed,
        ProcedureState::Recognized,
        ProcedureState::Terminated,
    ];

    pub fn is_terminal(self) -> bool {
        matches!(
            self,
            ProcedureState::Recognized | ProcedureState::Terminated
        )
    }

    /// Events the transition table accepts in this state.
    pub fn legal_events(self) -> Vec<EventKind> {
        EventKind::ALL
            .into_iter()
            .filter(|e| transition(self, *e).is_some())
            .collect()
    }
}

impl fmt::Display for ProcedureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EventKind {
    InitiateDecision,
    SelectCommittee,
    AnnounceVacancy,
    ReceiveApplication,
    CloseApplications,
    SubmitReport,
    BoardDecision,
    SenateConfirmation,
    RecognizeAppointments,
    Terminate,
}

impl EventKind {
    pub const ALL: [EventKind; 10] = [
        EventKind::InitiateDecision,
        EventKind::SelectCommittee,
        EventKind::AnnounceVacancy,
        EventKind::ReceiveApplication,
        EventKind::CloseApplications,
        EventKind::SubmitReport,
        EventKind::BoardDecision,
        EventKind::SenateConfirmation,
        EventKind::RecognizeAppointments,
        EventKind::Terminate,
    ];
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The transition table. `None` means the pair is illegal.
pub fn transition(state: ProcedureState, event: EventKind) -> Option<ProcedureState> {
    use EventKind as E;
    use ProcedureState as S;
    match (state, event) {
        (s, E::Terminate) if !s.is_terminal() => Some(S::Terminated),
        (S::Initiated, E::SelectCommittee) => Some(S::CommitteeSelected),
        (S::CommitteeSelected, E::AnnounceVacancy) => Some(S::VacancyAnnounced),
        (S::VacancyAnnounced | S::AcceptingApplications, E::ReceiveApplication) => {
            Some(S::AcceptingApplications)
        }
        (S::VacancyAnnounced | S::AcceptingApplications, E::CloseApplications) => {
            Some(S::ApplicationsClosed)
        }
        (S::ApplicationsClosed, E::SubmitReport) => Some(S::ReportSubmitted),
        (S::ReportSubmitted, E::BoardDecision) => Some(S::BoardDecided),
        (S::BoardDecided, E::SenateConfirmation) => Some(S::SenateConfirmed),
        (S::SenateConfirmed, E::RecognizeAppointments) => Some(S::Recognized),
        _ => None,
    }
}

/// Committee opinion on one applicant. The content is opaque to the system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assessment {
    pub applicant: PersonId,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", content = "payload")]
pub enum ProcedureEvent {
    InitiateDecision {
        council_ref: String,
    },
    SelectCommittee {
        members: Vec<PersonId>,
    },
    AnnounceVacancy {
        announcement_date: NaiveDate,
    },
    ReceiveApplication {
        applicant: PersonId,
        #[serde(default)]
        documents: Vec<String>,
    },
    CloseApplications {},
    SubmitReport {
        report_ref: String,
        #[serde(default)]
        assessments: Vec<Assessment>,
    },
    BoardDecision {
        promoted: Vec<PersonId>,
    },
    SenateConfirmation {},
    RecognizeAppointments {
        effective_date: NaiveDate,
    },
    Terminate {
        reason: String,
    },
}

impl ProcedureEvent {
    pub fn kind(&self) -> EventKind {
        match self {
            ProcedureEvent::InitiateDecision { .. } => EventKind::InitiateDecision,
            ProcedureEvent::SelectCommittee { .. } => EventKind::SelectCommittee,
            ProcedureEvent::AnnounceVacancy { .. } => EventKind::AnnounceVacancy,
            ProcedureEvent::ReceiveApplication { .. } => EventKind::ReceiveApplication,
            ProcedureEvent::CloseApplications {} => EventKind::CloseApplications,
            ProcedureEvent::SubmitReport { .. } => EventKind::SubmitReport,
            ProcedureEvent::BoardDecision { .. } => EventKind::BoardDecision,
            ProcedureEvent::SenateConfirmation {} => EventKind::SenateConfirmation,
            ProcedureEvent::RecognizeAppointments { .. } => EventKind::RecognizeAppointments,
            ProcedureEvent::Terminate { .. } => EventKind::Terminate,
        }
    }

    /// Persons the event refers to, which must exist in the directory.
    pub fn referenced_persons(&self) -> Vec<PersonId> {
        match self {
            ProcedureEvent::SelectCommittee { members } => members.clone(),
            ProcedureEvent::ReceiveApplication { applicant, .. } => vec![*applicant],
            ProcedureEvent::BoardDecision { promoted } => promoted.clone(),
            _ => Vec::new(),
        }
    }
}

/// An event as it happened: who submitted it and when. One of these per line
/// is the exported log format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordedEvent {
    #[serde(rename = "timestamp")]
    pub at: DateTime<Utc>,
    pub actor: String,
    #[serde(flatten)]
    pub event: ProcedureEvent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    #[serde(flatten)]
    pub record: RecordedEvent,
    pub resulting_state: ProcedureState,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Applicant {
    pub person_id: PersonId,
    pub received_at: DateTime<Utc>,
    pub documents: Vec<String>,
}

/// Everything a procedure accumulates from its events. Rebuilt from scratch
/// by [`replay`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcedureProgress {
    pub state: ProcedureState,
    pub council_ref: String,
    pub committee: Vec<PersonId>,
    pub announcement_date: Option<NaiveDate>,
    pub applicants: Vec<Applicant>,
    pub report_ref: Option<String>,
    pub assessments: Vec<Assessment>,
    pub promoted: Vec<PersonId>,
    pub effective_date: Option<NaiveDate>,
    pub termination_reason: Option<String>,
}

impl ProcedureProgress {
    /// Starts from the initiating decision.
    pub fn start(first: &RecordedEvent) -> Result<Self> {
        match &first.event {
            ProcedureEvent::InitiateDecision { council_ref } => {
                if council_ref.trim().is_empty() {
                    return Err(Error::Validation("council_ref must not be empty".into()));
                }
                Ok(Self {
                    state: ProcedureState::Initiated,
                    council_ref: council_ref.clone(),
                    committee: Vec::new(),
                    announcement_date: None,
                    applicants: Vec::new(),
                    report_ref: None,
                    assessments: Vec::new(),
                    promoted: Vec::new(),
                    effective_date: None,
                    termination_reason: None,
                })
            }
            other => Err(Error::Validation(format!(
                "a procedure history must start with InitiateDecision, not {}",
                other.kind()
            ))),
        }
    }

    pub fn is_applicant(&self, person: PersonId) -> bool {
        self.applicants.iter().any(|a| a.person_id == person)
    }

    /// Checks the transition table and every guard without changing anything.
    pub fn check(&self, event: &ProcedureEvent, policy: &Policy) -> Result<ProcedureState> {
        let next = transition(self.state, event.kind()).ok_or(Error::IllegalTransition {
            state: self.state,
            event: event.kind(),
        })?;
        match event {
            ProcedureEvent::SelectCommittee { members } => {
                if !all_distinct(members) {
                    return Err(Error::GuardViolation(Guard::CommitteeMembersDistinct));
                }
                if !policy.committee_size_ok(members.len()) {
                    return Err(Error::GuardViolation(Guard::CommitteeSize));
                }
            }
            ProcedureEvent::ReceiveApplication { applicant, .. } => {
                if self.is_applicant(*applicant) {
                    return Err(Error::GuardViolation(Guard::DuplicateApplicant));
                }
                if self.committee.contains(applicant) {
                    return Err(Error::GuardViolation(Guard::ApplicantOnCommittee));
                }
            }
            ProcedureEvent::SubmitReport {
                report_ref,
                assessments,
            } => {
                if report_ref.trim().is_empty() {
                    return Err(Error::GuardViolation(Guard::ReportReferenceRequired));
                }
                if assessments.iter().any(|a| !self.is_applicant(a.applicant)) {
                    return Err(Error::GuardViolation(Guard::AssessmentForNonApplicant));
                }
            }
            ProcedureEvent::BoardDecision { promoted } => {
                if !all_distinct(promoted) {
                    return Err(Error::GuardViolation(Guard::PromotedDuplicate));
                }
                if promoted.iter().any(|p| !self.is_applicant(*p)) {
                    return Err(Error::GuardViolation(Guard::PromotedNotApplicant));
                }
            }
            ProcedureEvent::Terminate { reason } => {
                if reason.trim().is_empty() {
                    return Err(Error::GuardViolation(Guard::TerminationReasonRequired));
                }
            }
            ProcedureEvent::InitiateDecision { .. }
            | ProcedureEvent::AnnounceVacancy { .. }
            | ProcedureEvent::CloseApplications {}
            | ProcedureEvent::SenateConfirmation {}
            | ProcedureEvent::RecognizeAppointments { .. } => {}
        }
        Ok(next)
    }

    /// Checks and applies one event.
    pub fn apply(&mut self, record: &RecordedEvent, policy: &Policy) -> Result<ProcedureState> {
        let next = self.check(&record.event, policy)?;
        match &record.event {
            ProcedureEvent::SelectCommittee { members } => self.committee = members.clone(),
            ProcedureEvent::AnnounceVacancy { announcement_date } => {
                self.announcement_date = Some(*announcement_date)
            }
            ProcedureEvent::ReceiveApplication {
                applicant,
                documents,
            } => self.applicants.push(Applicant {
                person_id: *applicant,
                received_at: record.at,
                documents: documents.clone(),
            }),
            ProcedureEvent::SubmitReport {
                report_ref,
                assessments,
            } => {
                self.report_ref = Some(report_ref.clone());
                self.assessments = assessments.clone();
            }
            ProcedureEvent::BoardDecision { promoted } => self.promoted = promoted.clone(),
            ProcedureEvent::RecognizeAppointments { effective_date } => {
                self.effective_date = Some(*effective_date)
            }
            ProcedureEvent::Terminate { reason } => self.termination_reason = Some(reason.clone()),
            ProcedureEvent::InitiateDecision { .. }
            | ProcedureEvent::CloseApplications {}
            | ProcedureEvent::SenateConfirmation {} => {}
        }
        self.state = next;
        Ok(next)
    }
}

fn all_distinct(ids: &[PersonId]) -> bool {
    let set: BTreeSet<_> = ids.iter().collect();
    set.len() == ids.len()
}

/// Replays a full event history and returns the state it ends in, or the
/// first error.
pub fn replay(history: &[RecordedEvent], policy: &Policy) -> Result<ProcedureState> {
    let (first, rest) = history
        .split_first()
        .ok_or_else(|| Error::Validation("empty procedure history".into()))?;
    let mut progress = ProcedureProgress::start(first)?;
    for record in rest {
        progress.apply(record, policy)?;
    }
    Ok(progress.state)
}

/// Parses an exported line-delimited event log.
pub fn parse_log(text: &str) -> Result<Vec<RecordedEvent>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            serde_json::from_str(line)
                .map_err(|e| Error::Validation(format!("log line {}: {e}", i + 1)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppointmentProcedure {
    pub procedure_id: ProcedureId,
    pub target_grade: AcademicGrade,
    pub progress: ProcedureProgress,
    pub history: Vec<HistoryEntry>,
    pub version: u64,
}

impl AppointmentProcedure {
    pub fn state(&self) -> ProcedureState {
        self.progress.state
    }

    pub fn events(&self) -> Vec<RecordedEvent> {
        self.history.iter().map(|h| h.record.clone()).collect()
    }

    /// The history as line-delimited JSON, one event per line.
    pub fn export_log(&self) -> String {
        let mut out = String::new();
        for entry in &self.history {
            out.push_str(&serde_json::to_string(&entry.record).expect("event serializes"));
            out.push('\n');
        }
        out
    }
}

/// A recognized appointment of a person to a grade.
///
/// Validity is the half-open interval `[valid_from, valid_to)`; `valid_to`
/// is absent for grades that do not expire.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeAppointment {
    pub appointment_id: AppointmentId,
    pub person_id: PersonId,
    pub grade: AcademicGrade,
    pub procedure_id: ProcedureId,
    pub valid_from: NaiveDate,
    pub valid_to: Option<NaiveDate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superseded_by: Option<AppointmentId>,
}

impl GradeAppointment {
    fn overlaps(&self, from: NaiveDate, to: Option<NaiveDate>) -> bool {
        let starts_before_other_ends = to.is_none_or(|t| self.valid_from < t);
        let other_starts_before_end = self.valid_to.is_none_or(|t| from < t);
        starts_before_other_ends && other_starts_before_end
    }
}

/// An appointment about to be created by recognition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppointmentDraft {
    pub person_id: PersonId,
    pub grade: AcademicGrade,
    pub valid_from: NaiveDate,
    pub valid_to: Option<NaiveDate>,
}

/// One draft per promoted applicant, starting on the effective date and
/// running for the policy term unless the grade does not expire.
pub fn recognize(
    procedure: &AppointmentProcedure,
    effective_date: NaiveDate,
    policy: &Policy,
) -> Result<Vec<AppointmentDraft>> {
    if procedure.state() != ProcedureState::SenateConfirmed {
        return Err(Error::IllegalTransition {
            state: procedure.state(),
            event: EventKind::RecognizeAppointments,
        });
    }
    let grade = procedure.target_grade;
    let valid_to =
        (!policy.is_non_expiring(&grade)).then(|| add_years(effective_date, policy.term_years));
    Ok(procedure
        .progress
        .promoted
        .iter()
        .map(|&person_id| AppointmentDraft {
            person_id,
            grade,
            valid_from: effective_date,
            valid_to,
        })
        .collect())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ProcedureBook {
    procedures: BTreeMap<ProcedureId, AppointmentProcedure>,
    seq: Sequence,
}

impl ProcedureBook {
    pub fn open(
        &mut self,
        target_grade: AcademicGrade,
        council_ref: &str,
        at: DateTime<Utc>,
        actor: &str,
    ) -> Result<AppointmentProcedure> {
        if !target_grade.track().is_appointable() {
            return Err(Error::InvalidTrack(target_grade.track()));
        }
        let record = RecordedEvent {
            at,
            actor: actor.to_string(),
            event: ProcedureEvent::InitiateDecision {
                council_ref: council_ref.to_string(),
            },
        };
        let progress = ProcedureProgress::start(&record)?;
        let procedure = AppointmentProcedure {
            procedure_id: ProcedureId(self.seq.next()),
            target_grade,
            history: vec![HistoryEntry {
                record,
                resulting_state: progress.state,
            }],
            progress,
            version: 1,
        };
        self.procedures
            .insert(procedure.procedure_id, procedure.clone());
        Ok(procedure)
    }

    pub fn get(&self, id: ProcedureId) -> Result<&AppointmentProcedure> {
        self.procedures
            .get(&id)
            .ok_or_else(|| Error::not_found("procedure", id))
    }

    pub fn all(&self) -> impl Iterator<Item = &AppointmentProcedure> {
        self.procedures.values()
    }

    /// Optimistic check, then the transition. Store-level checks that need
    /// other modules happen in the caller between `prepare` and `commit`.
    pub fn prepare(
        &self,
        id: ProcedureId,
        event: &ProcedureEvent,
        expected_version: u64,
        policy: &Policy,
    ) -> Result<&AppointmentProcedure> {
        let procedure = self.get(id)?;
        if procedure.version != expected_version {
            return Err(Error::VersionConflict {
                expected: expected_version,
                actual: procedure.version,
            });
        }
        procedure.progress.check(event, policy)?;
        Ok(procedure)
    }

    pub fn commit(
        &mut self,
        id: ProcedureId,
        record: RecordedEvent,
        policy: &Policy,
    ) -> Result<AppointmentProcedure> {
        let procedure = self
            .procedures
            .get_mut(&id)
            .ok_or_else(|| Error::not_found("procedure", id))?;
        let resulting_state = procedure.progress.apply(&record, policy)?;
        procedure.history.push(HistoryEntry {
            record,
            resulting_state,
        });
        procedure.version += 1;
        Ok(procedure.clone())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AppointmentBook {
    appointments: BTreeMap<AppointmentId, GradeAppointment>,
    seq: Sequence,
}

impl AppointmentBook {
    pub fn all(&self) -> impl Iterator<Item = &GradeAppointment> {
        self.appointments.values()
    }

    pub fn get(&self, id: AppointmentId) -> Result<&GradeAppointment> {
        self.appointments
            .get(&id)
            .ok_or_else(|| Error::not_found("appointment", id))
    }

    pub fn for_person(&self, person: PersonId) -> impl Iterator<Item = &GradeAppointment> {
        self.appointments
            .values()
            .filter(move |a| a.person_id == person)
    }

    /// Existing appointments a draft would overlap. A re-appointment starting
    /// strictly after an existing one supersedes it; anything else is refused.
    fn conflicts(&self, draft: &AppointmentDraft) -> Result<Vec<AppointmentId>> {
        let mut superseded = Vec::new();
        for existing in self.appointments.values() {
            if existing.person_id != draft.person_id
                || existing.grade != draft.grade
                || !existing.overlaps(draft.valid_from, draft.valid_to)
            {
                continue;
            }
            if existing.valid_from < draft.valid_from {
                superseded.push(existing.appointment_id);
            } else {
                return Err(Error::GuardViolation(Guard::AppointmentOverlap));
            }
        }
        Ok(superseded)
    }

    pub fn check(&self, drafts: &[AppointmentDraft]) -> Result<()> {
        if !all_distinct(&drafts.iter().map(|d| d.person_id).collect::<Vec<_>>()) {
            return Err(Error::GuardViolation(Guard::AppointmentOverlap));
        }
        for draft in drafts {
            self.conflicts(draft)?;
        }
        Ok(())
    }

    pub fn insert(
        &mut self,
        procedure_id: ProcedureId,
        drafts: Vec<AppointmentDraft>,
    ) -> Result<Vec<GradeAppointment>> {
        self.check(&drafts)?;
        let mut created = Vec::with_capacity(drafts.len());
        for draft in drafts {
            let superseded = self.conflicts(&draft)?;
            let appointment = GradeAppointment {
                appointment_id: AppointmentId(self.seq.next()),
                person_id: draft.person_id,
                grade: draft.grade,
                procedure_id,
                valid_from: draft.valid_from,
                valid_to: draft.valid_to,
                superseded_by: None,
            };
            for id in superseded {
                let old = self
                    .appointments
                    .get_mut(&id)
                    .expect("conflict refers to stored appointment");
                old.valid_to = Some(draft.valid_from);
                old.superseded_by = Some(appointment.appointment_id);
            }
            self.appointments
                .insert(appointment.appointment_id, appointment.clone());
            created.push(appointment);
        }
        Ok(created)
    }
}
