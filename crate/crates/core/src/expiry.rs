//! Appointment validity and the expiry review.
//!
//! A renewal procedure has to be initiated a fixed number of calendar months
//! before an appointment expires. Relative to an `as_of` date an appointment
//! is
//!
//! * `Expired` once the expiry date is reached (zero days left counts),
//! * `InitiationDue` from the initiation deadline until then,
//! * `Active` before the deadline.

use std::collections::BTreeSet;
use std::io;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::calendar::{days_between, subtract_months};
use crate::error::{Error, Result};
use crate::ids::{AppointmentId, NotificationId, PersonId, Sequence};
use crate::workflow::GradeAppointment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExpiryPhase {
    Active,
    InitiationDue,
    Expired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpiryStatus {
    pub phase: ExpiryPhase,
    pub days_remaining: i64,
    pub deadline_to_initiate: NaiveDate,
}

pub fn status_for(valid_to: NaiveDate, as_of: NaiveDate, warning_months: u32) -> ExpiryStatus {
    let deadline_to_initiate = subtract_months(valid_to, warning_months);
    let days_remaining = days_between(as_of, valid_to);
    let phase = if days_remaining <= 0 {
        ExpiryPhase::Expired
    } else if as_of >= deadline_to_initiate {
        ExpiryPhase::InitiationDue
    } else {
        ExpiryPhase::Active
    };
    ExpiryStatus {
        phase,
        days_remaining,
        deadline_to_initiate,
    }
}

pub fn evaluate(
    appointment: &GradeAppointment,
    as_of: NaiveDate,
    warning_months: u32,
) -> Result<ExpiryStatus> {
    let valid_to = appointment
        .valid_to
        .ok_or(Error::NonExpiring(appointment.appointment_id))?;
    Ok(status_for(valid_to, as_of, warning_months))
}

/// One line of the review: an appointment needing attention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewRow {
    pub appointment_id: AppointmentId,
    pub person_id: PersonId,
    pub grade: String,
    pub valid_to: NaiveDate,
    pub status: ExpiryStatus,
}

/// Expiring appointments that are due or expired, ordered by expiry date
/// then person. Superseded appointments are left out: their successor is
/// what matters.
pub fn review<'a>(
    appointments: impl IntoIterator<Item = &'a GradeAppointment>,
    as_of: NaiveDate,
    warning_months: u32,
) -> Vec<ReviewRow> {
    let mut rows: Vec<ReviewRow> = appointments
        .into_iter()
        .filter(|a| a.superseded_by.is_none())
        .filter_map(|a| {
            let status = evaluate(a, as_of, warning_months).ok()?;
            (status.phase != ExpiryPhase::Active).then(|| ReviewRow {
                appointment_id: a.appointment_id,
                person_id: a.person_id,
                grade: a.grade.name().to_string(),
                valid_to: a.valid_to.expect("evaluated appointments expire"),
                status,
            })
        })
        .collect();
    rows.sort_by_key(|r| (r.valid_to, r.person_id, r.appointment_id));
    rows
}

/// Writes review rows as CSV with columns
/// `person,grade,valid_to,status,deadline_to_initiate`.
pub fn write_review_csv<W: io::Write>(rows: &[ReviewRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io_err = |e: csv::Error| Error::Validation(format!("csv output: {e}"));
    w.write_record([
        "person",
        "grade",
        "valid_to",
        "status",
        "deadline_to_initiate",
    ])
    .map_err(io_err)?;
    for row in rows {
        w.write_record([
            row.person_id.0.to_string(),
            row.grade.clone(),
            row.valid_to.to_string(),
            format!("{:?}", row.status.phase),
            row.status.deadline_to_initiate.to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush()
        .map_err(|e| Error::Validation(format!("csv output: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpiryNotification {
    pub notification_id: NotificationId,
    pub appointment_id: AppointmentId,
    pub person_id: PersonId,
    pub grade: String,
    pub valid_to: NaiveDate,
    pub status: ExpiryStatus,
    pub generated_at: DateTime<Utc>,
}

/// Every notification ever generated. At most one per appointment and phase.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NotificationLedger {
    notifications: Vec<ExpiryNotification>,
    seq: Sequence,
}

impl NotificationLedger {
    pub fn all(&self) -> &[ExpiryNotification] {
        &self.notifications
    }

    pub fn has(&self, appointment: AppointmentId, phase: ExpiryPhase) -> bool {
        self.notifications
            .iter()
            .any(|n| n.appointment_id == appointment && n.status.phase == phase)
    }

    /// Records a notification for every due or expired appointment that does
    /// not already have one for its current phase, and returns the new ones
    /// in review order.
    pub fn generate<'a>(
        &mut self,
        appointments: impl IntoIterator<Item = &'a GradeAppointment>,
        as_of: NaiveDate,
        warning_months: u32,
        now: DateTime<Utc>,
    ) -> Vec<ExpiryNotification> {
        let existing: BTreeSet<(AppointmentId, ExpiryPhase)> = self
            .notifications
            .iter()
            .map(|n| (n.appointment_id, n.status.phase))
            .collect();
        let mut created = Vec::new();
        for row in review(appointments, as_of, warning_months) {
            if existing.contains(&(row.appointment_id, row.status.phase)) {
                continue;
            }
            let note = ExpiryNotification {
                notification_id: NotificationId(self.seq.next()),
                appointment_id: row.appointment_id,
                person_id: row.person_id,
                grade: row.grade,
                valid_to: row.valid_to,
                status: row.status,
                generated_at: now,
            };
            self.notifications.push(note.clone());
            created.push(note);
        }
        created
    }
}
