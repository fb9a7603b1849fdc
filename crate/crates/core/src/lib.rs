//! Core domain of the academic HR service.
//!
//! The crate is synchronous and storage-agnostic. All state lives in
//! [`HrState`], a plain serializable value, and every mutation goes through
//! the [`Hrm`] facade so cross-module rules (document owners must exist,
//! committee members must be registered persons, ...) are enforced in one
//! place. The service crate adds persistence, HTTP and the CLI on top.

pub mod bibliography;
pub mod calendar;
pub mod clock;
pub mod error;
pub mod expiry;
mod hrm;
pub mod ids;
pub mod ministry;
pub mod people;
pub mod policy;
pub mod registry;
pub mod taxonomy;
pub mod triage;
pub mod vault;
pub mod workflow;

pub use crate::clock::{Clock, ManualClock, SystemClock};
pub use crate::error::{Error, Guard, Result};
pub use crate::hrm::{HrState, Hrm};
pub use crate::ids::{
    ApplicationId, AppointmentId, DocumentId, NotificationId, PersonId, ProcedureId, RequirementId,
};
pub use crate::policy::Policy;
pub use crate::taxonomy::{AcademicGrade, GradeTrack};
