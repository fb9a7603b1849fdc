mod support;

use hrm_core::taxonomy::{AcademicGrade, GradeTrack};
use hrm_core::workflow::{replay, EventKind, ProcedureEvent, ProcedureState, RecordedEvent};
use hrm_core::{Clock, Error, Guard, Hrm, Policy};
use hrm_oracles::transitions;
use proptest::prelude::*;
use support::{d, Cast};

fn associate_professor() -> AcademicGrade {
    AcademicGrade::lookup("associate professor", GradeTrack::ScientificResearch).unwrap()
}

/// Drives a new procedure through `kinds` (which must not include the
/// initiating decision) and returns the outcome of each call.
fn drive(hrm: &mut Hrm, cast: &Cast, kinds: &[EventKind]) -> Vec<Result<ProcedureState, Error>> {
    let proc = hrm
        .open_procedure(associate_professor(), "FC-2024/7", "hr")
        .unwrap();
    let mut history = vec![EventKind::InitiateDecision];
    let mut version = proc.version;
    let mut out = Vec::new();
    for &kind in kinds {
        let event = cast.event(kind, &history);
        let res = hrm
            .advance(proc.procedure_id, event, version, "hr")
            .map(|p| {
                assert_eq!(p.version, version + 1, "versions are gap-free");
                version = p.version;
                p.state()
            });
        if res.is_ok() {
            history.push(kind);
        }
        out.push(res);
    }
    out
}

#[test]
fn full_sequence_recognizes_one_appointment() {
    let mut hrm = support::hrm();
    let cast = Cast::register(&mut hrm, 2);
    use EventKind::*;
    let kinds = [
        SelectCommittee,
        AnnounceVacancy,
        ReceiveApplication,
        ReceiveApplication,
        CloseApplications,
        SubmitReport,
        BoardDecision,
        SenateConfirmation,
        RecognizeAppointments,
    ];
    let results = drive(&mut hrm, &cast, &kinds);
    let states: Vec<_> = results.into_iter().map(Result::unwrap).collect();
    assert_eq!(*states.last().unwrap(), ProcedureState::Recognized);

    let names: Vec<&str> = std::iter::once("InitiateDecision")
        .chain(kinds.iter().map(|k| transitions::EVENTS[*k as usize]))
        .collect();
    let oracle_states: Vec<_> = (2..=names.len())
        .map(|n| transitions::run(&names[..n]).unwrap())
        .collect();
    let ours: Vec<String> = states.iter().map(|s| s.to_string()).collect();
    assert_eq!(ours, oracle_states);

    let appointments: Vec<_> = hrm.appointments().cloned().collect();
    assert_eq!(appointments.len(), 1);
    assert_eq!(appointments[0].person_id, cast.applicants[0]);
    assert_eq!(appointments[0].valid_from, d(2020, 3, 1));
    assert_eq!(appointments[0].valid_to, Some(d(2025, 3, 1)));
}

#[test]
fn empty_promotion_still_recognizes() {
    let mut hrm = support::hrm();
    let cast = Cast::register(&mut hrm, 0);
    use EventKind::*;
    let results = drive(
        &mut hrm,
        &cast,
        &[
            SelectCommittee,
            AnnounceVacancy,
            CloseApplications,
            SubmitReport,
            BoardDecision,
            SenateConfirmation,
            RecognizeAppointments,
        ],
    );
    assert_eq!(results.last().unwrap(), &Ok(ProcedureState::Recognized));
    assert_eq!(hrm.appointments().count(), 0);
}

#[test]
fn emeritus_appointments_do_not_expire() {
    let mut hrm = support::hrm();
    let cast = Cast::register(&mut hrm, 1);
    let emeritus =
        AcademicGrade::lookup("professor emeritus", GradeTrack::ScientificResearch).unwrap();
    let proc = hrm.open_procedure(emeritus, "FC-9", "hr").unwrap();
    use EventKind::*;
    let mut history = vec![InitiateDecision];
    for (i, kind) in [
        SelectCommittee,
        AnnounceVacancy,
        ReceiveApplication,
        CloseApplications,
        SubmitReport,
        BoardDecision,
        SenateConfirmation,
        RecognizeAppointments,
    ]
    .into_iter()
    .enumerate()
    {
        hrm.advance(
            proc.procedure_id,
            cast.event(kind, &history),
            i as u64 + 1,
            "hr",
        )
        .unwrap();
        history.push(kind);
    }
    let appts: Vec<_> = hrm.appointments().collect();
    assert_eq!(appts.len(), 1);
    assert_eq!(appts[0].valid_to, None);
    assert!(hrm.expiry_review(d(2100, 1, 1)).is_empty());
}

#[test]
fn configured_term_is_used() {
    let policy = Policy {
        term_years: 4,
        non_expiring_grades: vec![],
        ..Policy::default()
    };
    let mut hrm = Hrm::new(policy, support::clock()).unwrap();
    let cast = Cast::register(&mut hrm, 1);
    let proc = hrm
        .open_procedure(associate_professor(), "FC-1", "hr")
        .unwrap();
    use EventKind::*;
    let mut history = vec![InitiateDecision];
    for (i, kind) in [
        SelectCommittee,
        AnnounceVacancy,
        ReceiveApplication,
        CloseApplications,
        SubmitReport,
        BoardDecision,
        SenateConfirmation,
        RecognizeAppointments,
    ]
    .into_iter()
    .enumerate()
    {
        hrm.advance(
            proc.procedure_id,
            cast.event(kind, &history),
            i as u64 + 1,
            "hr",
        )
        .unwrap();
        history.push(kind);
    }
    assert_eq!(
        hrm.appointments().next().unwrap().valid_to,
        Some(d(2024, 3, 1))
    );
}

#[test]
fn stale_version_is_a_conflict() {
    let mut hrm = support::hrm();
    let cast = Cast::register(&mut hrm, 0);
    let proc = hrm
        .open_procedure(associate_professor(), "FC-1", "hr")
        .unwrap();
    let select = cast.event(EventKind::SelectCommittee, &[]);
    hrm.advance(proc.procedure_id, select.clone(), 1, "a")
        .unwrap();
    let err = hrm
        .advance(
            proc.procedure_id,
            ProcedureEvent::Terminate { reason: "x".into() },
            1,
            "b",
        )
        .unwrap_err();
    assert_eq!(
        err,
        Error::VersionConflict {
            expected: 1,
            actual: 2
        }
    );
    assert!(matches!(
        hrm.advance(hrm_core::ProcedureId(77), select, 1, "a"),
        Err(Error::NotFound { .. })
    ));
}

#[test]
fn unknown_persons_are_rejected() {
    let mut hrm = support::hrm();
    let proc = hrm
        .open_procedure(associate_professor(), "FC-1", "hr")
        .unwrap();
    let ghosts = ProcedureEvent::SelectCommittee {
        members: vec![
            hrm_core::PersonId(90),
            hrm_core::PersonId(91),
            hrm_core::PersonId(92),
        ],
    };
    assert!(matches!(
        hrm.advance(proc.procedure_id, ghosts, 1, "hr"),
        Err(Error::NotFound { .. })
    ));
    assert_eq!(hrm.procedure(proc.procedure_id).unwrap().version, 1);
}

#[test]
fn reappointment_of_same_person_supersedes() {
    let mut hrm = support::hrm();
    let cast = Cast::register(&mut hrm, 1);
    use EventKind::*;
    let path = [
        SelectCommittee,
        AnnounceVacancy,
        ReceiveApplication,
        CloseApplications,
        SubmitReport,
        BoardDecision,
        SenateConfirmation,
    ];
    let mut recognize_on = |date| {
        let proc = hrm
            .open_procedure(associate_professor(), "FC", "hr")
            .unwrap();
        let mut history = vec![InitiateDecision];
        for (i, kind) in path.into_iter().enumerate() {
            hrm.advance(
                proc.procedure_id,
                cast.event(kind, &history),
                i as u64 + 1,
                "hr",
            )
            .unwrap();
            history.push(kind);
        }
        hrm.advance(
            proc.procedure_id,
            ProcedureEvent::RecognizeAppointments {
                effective_date: date,
            },
            8,
            "hr",
        )
    };
    recognize_on(d(2020, 3, 1)).unwrap();
    assert_eq!(
        recognize_on(d(2019, 3, 1)).unwrap_err(),
        Error::GuardViolation(Guard::AppointmentOverlap)
    );
    recognize_on(d(2024, 12, 1)).unwrap();
    let appts: Vec<_> = hrm.appointments().collect();
    assert_eq!(appts.len(), 2);
    assert_eq!(appts[0].valid_to, Some(d(2024, 12, 1)));
    assert_eq!(appts[1].valid_to, Some(d(2029, 12, 1)));
}

/// Every event string of length up to six over the full alphabet: the
/// result of feeding it to `replay` equals the result of sequential
/// `advance` calls, and both agree with the table oracle.
#[test]
fn replay_matches_sequential_advance_up_to_six_events() {
    let mut base = support::hrm();
    let cast = Cast::register(&mut base, 6);
    let base_state = base.state().clone();
    let policy = Policy::default();
    let mut checked = 0usize;
    let mut stack: Vec<Vec<EventKind>> = EventKind::ALL.iter().map(|k| vec![*k]).collect();
    while let Some(kinds) = stack.pop() {
        // Build the concrete events.
        let mut events = Vec::new();
        for i in 0..kinds.len() {
            let e = cast.event(kinds[i], &kinds[..i]);
            events.push(RecordedEvent {
                at: support::clock().now(),
                actor: "hr".into(),
                event: e,
            });
        }
        let replayed = replay(&events, &policy);

        let names: Vec<&str> = kinds
            .iter()
            .map(|k| transitions::EVENTS[*k as usize])
            .collect();
        let oracle = transitions::run(&names);

        let sequential = if kinds[0] == EventKind::InitiateDecision {
            let mut hrm =
                Hrm::from_state(base_state.clone(), policy.clone(), support::clock()).unwrap();
            let proc = hrm
                .open_procedure(associate_professor(), "FC-2024/7", "hr")
                .unwrap();
            let mut result = Ok(proc.state());
            for (i, e) in events.iter().enumerate().skip(1) {
                result = hrm
                    .advance(proc.procedure_id, e.event.clone(), i as u64, "hr")
                    .map(|p| p.state());
                if result.is_err() {
                    break;
                }
            }
            result
        } else {
            Err(Error::Validation("not initiated".into()))
        };

        match (&replayed, &sequential, oracle) {
            (Ok(a), Ok(b), Ok(o)) => {
                assert_eq!(a, b);
                assert_eq!(a.to_string(), o);
            }
            (Err(a), Err(b), Err(_)) => {
                if kinds[0] == EventKind::InitiateDecision {
                    assert_eq!(a, b, "{names:?}");
                }
            }
            other => panic!("disagreement on {names:?}: {other:?}"),
        }
        checked += 1;
        if kinds.len() < 6 && replayed.is_ok() {
            for k in EventKind::ALL {
                let mut next = kinds.clone();
                next.push(k);
                stack.push(next);
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn oracle_alphabet_lines_up_with_event_kinds() {
    for (i, kind) in EventKind::ALL.iter().enumerate() {
        assert_eq!(transitions::EVENTS[i], support::kind_name(*kind));
        assert_eq!(*kind as usize, i);
    }
    for (i, state) in ProcedureState::ALL.iter().enumerate() {
        assert_eq!(transitions::STATES[i], state.to_string());
        let ours: Vec<String> = state
            .legal_events()
            .into_iter()
            .map(support::kind_name)
            .collect();
        assert_eq!(ours, transitions::legal_events(transitions::STATES[i]));
    }
}

fn any_kind() -> impl Strategy<Value = EventKind> {
    (0..EventKind::ALL.len()).prop_map(|i| EventKind::ALL[i])
}

proptest! {
    /// Random event strings with random promoted lists: promoted is always a
    /// subset of the applicants, and the committee never overlaps them.
    #[test]
    fn promotion_soundness(kinds in prop::collection::vec(any_kind(), 0..14), picks in prop::collection::vec(0usize..8, 0..4)) {
        let mut hrm = support::hrm();
        let cast = Cast::register(&mut hrm, 14);
        let proc = hrm.open_procedure(associate_professor(), "FC", "hr").unwrap();
        let mut history = vec![EventKind::InitiateDecision];
        for kind in kinds {
            let event = match kind {
                EventKind::BoardDecision => ProcedureEvent::BoardDecision {
                    promoted: picks.iter().map(|&i| cast.applicants[i]).collect(),
                },
                EventKind::ReceiveApplication if history.len() % 3 == 0 => ProcedureEvent::ReceiveApplication {
                    applicant: cast.committee[0],
                    documents: vec![],
                },
                _ => cast.event(kind, &history),
            };
            let version = hrm.procedure(proc.procedure_id).unwrap().version;
            if hrm.advance(proc.procedure_id, event, version, "hr").is_ok() {
                history.push(kind);
            }
            let p = hrm.procedure(proc.procedure_id).unwrap();
            prop_assert_eq!(p.version as usize, p.history.len());
            for promoted in &p.progress.promoted {
                prop_assert!(p.progress.is_applicant(*promoted));
            }
            for member in &p.progress.committee {
                prop_assert!(!p.progress.is_applicant(*member));
            }
            prop_assert_eq!(replay(&p.events(), &Policy::default()), Ok(p.state()));
        }
    }
}
