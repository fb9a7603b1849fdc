#![allow(dead_code)]

use std::sync::Arc;

use chrono::{Datelike, NaiveDate, TimeZone, Utc};
use hrm_core::workflow::{EventKind, ProcedureEvent};
use hrm_core::{Hrm, ManualClock, PersonId, Policy};
use hrm_oracles::calendar::Ymd;

pub fn d(y: i32, m: u32, day: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, day).unwrap()
}

pub fn ymd(date: NaiveDate) -> Ymd {
    (date.year(), date.month(), date.day())
}

pub fn date(ymd: Ymd) -> NaiveDate {
    d(ymd.0, ymd.1, ymd.2)
}

pub fn clock() -> Arc<ManualClock> {
    Arc::new(ManualClock::new(
        Utc.with_ymd_and_hms(2024, 6, 3, 10, 0, 0).unwrap(),
    ))
}

pub fn hrm() -> Hrm {
    Hrm::new(Policy::default(), clock()).unwrap()
}

pub fn kind_name(kind: EventKind) -> String {
    format!("{kind:?}")
}

/// Persons available to scripted procedures.
#[derive(Debug, Clone)]
pub struct Cast {
    pub committee: Vec<PersonId>,
    pub applicants: Vec<PersonId>,
}

impl Cast {
    pub fn register(hrm: &mut Hrm, applicants: usize) -> Self {
        let mut person = |name: String| {
            hrm.register_person(&name, d(1970, 1, 1), true)
                .unwrap()
                .person_id
        };
        let committee = (1..=3)
            .map(|i| person(format!("Committee member {i}")))
            .collect();
        let applicants = (1..=applicants)
            .map(|i| person(format!("Applicant {i}")))
            .collect();
        Cast {
            committee,
            applicants,
        }
    }

    /// A concrete event for `kind`, given the kinds already in the history.
    /// Every application brings a new applicant and the board promotes the
    /// first applicant when there is one, so guards never fail and only the
    /// transition table decides.
    pub fn event(&self, kind: EventKind, history: &[EventKind]) -> ProcedureEvent {
        let received = history
            .iter()
            .filter(|k| **k == EventKind::ReceiveApplication)
            .count();
        match kind {
            EventKind::InitiateDecision => ProcedureEvent::InitiateDecision {
                council_ref: "FC-2024/7".into(),
            },
            EventKind::SelectCommittee => ProcedureEvent::SelectCommittee {
                members: self.committee.clone(),
            },
            EventKind::AnnounceVacancy => ProcedureEvent::AnnounceVacancy {
                announcement_date: d(2024, 1, 10),
            },
            EventKind::ReceiveApplication => ProcedureEvent::ReceiveApplication {
                applicant: self.applicants[received],
                documents: vec![format!("repo://applications/{received}.pdf")],
            },
            EventKind::CloseApplications => ProcedureEvent::CloseApplications {},
            EventKind::SubmitReport => ProcedureEvent::SubmitReport {
                report_ref: "REP-1".into(),
                assessments: vec![],
            },
            EventKind::BoardDecision => ProcedureEvent::BoardDecision {
                promoted: if received > 0 {
                    vec![self.applicants[0]]
                } else {
                    vec![]
                },
            },
            EventKind::SenateConfirmation => ProcedureEvent::SenateConfirmation {},
            EventKind::RecognizeAppointments => ProcedureEvent::RecognizeAppointments {
                effective_date: d(2020, 3, 1),
            },
            EventKind::Terminate => ProcedureEvent::Terminate {
                reason: "cancelled".into(),
            },
        }
    }
}
