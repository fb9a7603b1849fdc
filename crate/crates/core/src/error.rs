use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ids::{ApplicationId, AppointmentId, PersonId};
use crate::taxonomy::GradeTrack;
use crate::vault::OwnerRef;
use crate::workflow::{EventKind, ProcedureState};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Named workflow guards. The name is what operators see when a guard fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guard {
    CommitteeSize,
    CommitteeMembersDistinct,
    DuplicateApplicant,
    ApplicantOnCommittee,
    ReportReferenceRequired,
    AssessmentForNonApplicant,
    PromotedNotApplicant,
    PromotedDuplicate,
    TerminationReasonRequired,
    AppointmentOverlap,
}

impl Guard {
    pub const ALL: [Guard; 10] = [
        Guard::CommitteeSize,
        Guard::CommitteeMembersDistinct,
        Guard::DuplicateApplicant,
        Guard::ApplicantOnCommittee,
        Guard::ReportReferenceRequired,
        Guard::AssessmentForNonApplicant,
        Guard::PromotedNotApplicant,
        Guard::PromotedDuplicate,
        Guard::TerminationReasonRequired,
        Guard::AppointmentOverlap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Guard::CommitteeSize => "committee_size",
            Guard::CommitteeMembersDistinct => "committee_members_distinct",
            Guard::DuplicateApplicant => "duplicate_applicant",
            Guard::ApplicantOnCommittee => "applicant_on_committee",
            Guard::ReportReferenceRequired => "report_reference_required",
            Guard::AssessmentForNonApplicant => "assessment_for_non_applicant",
            Guard::PromotedNotApplicant => "promoted_not_applicant",
            Guard::PromotedDuplicate => "promoted_duplicate",
            Guard::TerminationReasonRequired => "termination_reason_required",
            Guard::AppointmentOverlap => "appointment_overlap",
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{entity} {id} not found")]
    NotFound { entity: &'static str, id: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("unknown grade {0:?}")]
    UnknownGrade(String),
    #[error("cannot compare a {left:?} grade with a {right:?} grade")]
    TrackMismatch { left: GradeTrack, right: GradeTrack },
    #[error("{0:?} grades are not filled through appointment procedures")]
    InvalidTrack(GradeTrack),
    #[error("event {event} is not allowed in state {state}")]
    IllegalTransition {
        state: ProcedureState,
        event: EventKind,
    },
    #[error("guard {0} violated")]
    GuardViolation(Guard),
    #[error("stale version: expected {expected}, current is {actual}")]
    VersionConflict { expected: u64, actual: u64 },
    #[error("appointment {0} does not expire")]
    NonExpiring(AppointmentId),
    #[error("person {0} already has an active registry entry or a pending application")]
    AlreadyRegistered(PersonId),
    #[error("{0:?} is not a registrable category")]
    CategoryNotRegistrable(String),
    #[error("person {0} has no doctoral degree on record")]
    MissingDoctorate(PersonId),
    #[error("application {0} has already been decided")]
    AlreadyDecided(ApplicationId),
    #[error("scientist id {0:?} is already assigned")]
    DuplicateScientistId(String),
    #[error("person {0} is not mapped to a bibliography author")]
    NoAuthorMapping(PersonId),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("document owner {0} not found")]
    OwnerNotFound(OwnerRef),
    #[error("document path must not be empty")]
    EmptyPath,
}

impl Error {
    pub fn not_found(entity: &'static str, id: impl fmt::Display) -> Self {
        Error::NotFound {
            entity,
            id: id.to_string(),
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotFound { .. } => "not_found",
            Error::Validation(_) => "validation_error",
            Error::UnknownGrade(_) => "unknown_grade",
            Error::TrackMismatch { .. } => "track_mismatch",
            Error::InvalidTrack(_) => "invalid_track",
            Error::IllegalTransition { .. } => "illegal_transition",
            Error::GuardViolation(_) => "guard_violation",
            Error::VersionConflict { .. } => "version_conflict",
            Error::NonExpiring(_) => "non_expiring",
            Error::AlreadyRegistered(_) => "already_registered",
            Error::CategoryNotRegistrable(_) => "category_not_registrable",
            Error::MissingDoctorate(_) => "missing_doctorate",
            Error::AlreadyDecided(_) => "already_decided",
            Error::DuplicateScientistId(_) => "duplicate_scientist_id",
            Error::NoAuthorMapping(_) => "no_author_mapping",
            Error::Transport(_) => "transport_error",
            Error::Protocol(_) => "protocol_error",
            Error::OwnerNotFound(_) => "owner_not_found",
            Error::EmptyPath => "empty_path",
        }
    }
}
