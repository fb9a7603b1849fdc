//! Demo data for an empty store: a small faculty with one recognized
//! procedure, appointments in every expiry phase, a registry application,
//! documents and a requirements backlog. Dates are relative to the store's
//! clock so the expiry review always has something to show.

use chrono::{Duration, NaiveDate};
use hrm_core::calendar::add_months;
use hrm_core::people::StaffGroup;
use hrm_core::taxonomy::{AcademicGrade, GradeTrack};
use hrm_core::vault::OwnerRef;
use hrm_core::workflow::{Assessment, ProcedureEvent};
use hrm_core::{Error, Hrm, PersonId, ProcedureId, Result};
use serde::{Deserialize, Serialize};

use crate::store::Audited;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub persons: usize,
    pub procedures: Vec<ProcedureId>,
    pub appointments: usize,
    pub requirements: usize,
}

impl Audited for SeedSummary {}

const ACTOR: &str = "seed";

fn run(hrm: &mut Hrm, id: ProcedureId, events: Vec<ProcedureEvent>) -> Result<()> {
    for event in events {
        let version = hrm.procedure(id)?.version;
        hrm.advance(id, event, version, ACTOR)?;
    }
    Ok(())
}

fn recognized(
    hrm: &mut Hrm,
    grade: AcademicGrade,
    committee: &[PersonId],
    applicants: &[PersonId],
    effective_date: NaiveDate,
) -> Result<ProcedureId> {
    let id = hrm.open_procedure(grade, "FC-DEMO", ACTOR)?.procedure_id;
    let mut events = vec![
        ProcedureEvent::SelectCommittee {
            members: committee.to_vec(),
        },
        ProcedureEvent::AnnounceVacancy {
            announcement_date: effective_date - Duration::days(60),
        },
    ];
    events.extend(
        applicants
            .iter()
            .map(|&applicant| ProcedureEvent::ReceiveApplication {
                applicant,
                documents: vec![format!("repo://applications/{applicant}.pdf")],
            }),
    );
    events.extend([
        ProcedureEvent::CloseApplications {},
        ProcedureEvent::SubmitReport {
            report_ref: "REP-DEMO".into(),
            assessments: applicants
                .iter()
                .map(|&applicant| Assessment {
                    applicant,
                    summary: "meets the requirements".into(),
                })
                .collect(),
        },
        ProcedureEvent::BoardDecision {
            promoted: applicants.to_vec(),
        },
        ProcedureEvent::SenateConfirmation {},
        ProcedureEvent::RecognizeAppointments { effective_date },
    ]);
    run(hrm, id, events)?;
    Ok(id)
}

pub fn seed_demo(hrm: &mut Hrm) -> Result<SeedSummary> {
    if hrm.state().directory.persons().next().is_some() {
        return Err(Error::Validation("the store is not empty".into()));
    }
    let today = hrm.clock().today();
    let date = |y, m, d| NaiveDate::from_ymd_opt(y, m, d).expect("valid demo date");

    let people = [
        ("Ana Horvat", date(1961, 4, 12), true),
        ("Marko Babić", date(1968, 9, 3), true),
        ("Ivana Kovač", date(1972, 1, 27), true),
        ("Petra Novak", date(1984, 6, 30), true),
        ("Luka Jurić", date(1986, 11, 5), true),
        ("Maja Knežević", date(1990, 2, 14), false),
        ("Tomislav Marić", date(1979, 8, 21), true),
    ];
    let mut ids = Vec::new();
    for (name, dob, doctorate) in people {
        let person = hrm.register_person(name, dob, doctorate)?;
        hrm.hire(person.person_id, StaffGroup::Academic, date(2005, 10, 1))?;
        ids.push(person.person_id);
    }
    let committee = &ids[0..3];
    let assistant_professor =
        AcademicGrade::lookup("assistant professor", GradeTrack::ScientificResearch)?;
    let term = hrm.policy().term_years as i32 * 12;

    // One appointment still active, one inside the warning window, one expired.
    let active = recognized(
        hrm,
        assistant_professor,
        committee,
        &ids[3..4],
        add_months(today, -12),
    )?;
    let due = recognized(
        hrm,
        assistant_professor,
        committee,
        &ids[4..5],
        add_months(today, 1 - term),
    )?;
    let expired = recognized(
        hrm,
        AcademicGrade::lookup("senior lecturer", GradeTrack::Teaching)?,
        committee,
        &ids[6..7],
        add_months(today, -term) - Duration::days(10),
    )?;

    let open = hrm.open_procedure(
        AcademicGrade::lookup("associate professor", GradeTrack::ScientificResearch)?,
        "FC-DEMO-2",
        ACTOR,
    )?;
    run(
        hrm,
        open.procedure_id,
        vec![ProcedureEvent::SelectCommittee {
            members: committee.to_vec(),
        }],
    )?;

    hrm.attach(
        OwnerRef::Procedure(active),
        "repo://procedures/demo/committee-report.pdf",
        "pdf",
        "committee report",
    )?;
    hrm.attach(
        OwnerRef::Procedure(due),
        "\\\\fileserver\\hr\\demo\\decision.doc",
        "doc",
        "senate decision",
    )?;
    hrm.attach(
        OwnerRef::Employee(ids[5]),
        "https://dms.example.org/hr/contract-5",
        "html",
        "employment contract",
    )?;
    hrm.submit_registration(
        ids[3],
        "research associate",
        vec!["repo://registry/diploma.pdf".into()],
    )?;
    hrm.map_author(ids[0], "A-1001")?;

    let requirements = [
        ("Track grade appointment expiry", "functionality", "M"),
        ("Respond to review queries within 2 s", "performance", "S"),
        (
            "Keep attached documents at their original location",
            "implementation",
            "M",
        ),
        ("Export the backlog as CSV", "interfaces", "C"),
        ("Scanned document viewer", "usability", "W"),
    ];
    for (text, category, priority) in requirements {
        hrm.add_requirement(text, category, priority)?;
    }

    Ok(SeedSummary {
        persons: ids.len(),
        procedures: vec![active, due, expired, open.procedure_id],
        appointments: hrm.appointments().count(),
        requirements: requirements.len(),
    })
}
