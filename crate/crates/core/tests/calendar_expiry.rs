mod support;

use hrm_core::calendar::{add_years, subtract_months};
use hrm_core::expiry::{evaluate, status_for, ExpiryPhase};
use hrm_core::ids::{AppointmentId, PersonId, ProcedureId};
use hrm_core::taxonomy::{AcademicGrade, GradeTrack};
use hrm_core::workflow::GradeAppointment;
use hrm_oracles::calendar as oracle;
use proptest::prelude::*;
use support::{d, date, ymd};

#[test]
fn calendar_matches_day_walking_oracle_1990_to_2040() {
    for day in oracle::all_dates((1990, 1, 1), (2040, 12, 31)) {
        let ours = date(day);
        assert_eq!(
            ymd(add_years(ours, 5)),
            oracle::add_years(day, 5),
            "add_years {day:?}"
        );
        assert_eq!(
            ymd(subtract_months(ours, 3)),
            oracle::subtract_months(day, 3),
            "subtract_months {day:?}"
        );
    }
}

#[test]
fn other_offsets_on_month_ends() {
    for day in oracle::all_dates((1995, 1, 1), (2005, 12, 31))
        .into_iter()
        .filter(|d| d.2 >= 28)
    {
        for n in [0, 1, 4, 7, 12, 13] {
            assert_eq!(
                ymd(subtract_months(date(day), n)),
                oracle::subtract_months(day, n)
            );
            assert_eq!(ymd(add_years(date(day), n)), oracle::add_years(day, n));
        }
    }
}

#[test]
fn expired_example_counts_days() {
    let s = status_for(d(2015, 1, 15), d(2015, 2, 1), 3);
    assert_eq!(
        s.days_remaining,
        oracle::days_between((2015, 2, 1), (2015, 1, 15))
    );
    assert_eq!((s.phase, s.days_remaining), (ExpiryPhase::Expired, -17));
}

fn appointment(valid_to: chrono::NaiveDate) -> GradeAppointment {
    GradeAppointment {
        appointment_id: AppointmentId(1),
        person_id: PersonId(1),
        grade: AcademicGrade::lookup("senior lecturer", GradeTrack::Teaching).unwrap(),
        procedure_id: ProcedureId(1),
        valid_from: d(1990, 1, 1),
        valid_to: Some(valid_to),
        superseded_by: None,
    }
}

fn any_date() -> impl Strategy<Value = chrono::NaiveDate> {
    (0i64..18_627).prop_map(|offset| d(1990, 1, 1) + chrono::Duration::days(offset))
}

proptest! {
    #[test]
    fn status_never_moves_backward(valid_to in any_date(), start in any_date(), steps in prop::collection::vec(0i64..200, 1..20)) {
        let appt = appointment(valid_to);
        let mut as_of = start;
        let mut previous = evaluate(&appt, as_of, 3).unwrap().phase;
        for step in steps {
            as_of += chrono::Duration::days(step);
            let phase = evaluate(&appt, as_of, 3).unwrap().phase;
            prop_assert!(phase >= previous, "{:?} -> {:?}", previous, phase);
            previous = phase;
        }
    }

    #[test]
    fn exactly_one_phase_holds(valid_to in any_date(), as_of in any_date()) {
        let s = status_for(valid_to, as_of, 3);
        let expired = s.days_remaining <= 0;
        let due = s.days_remaining > 0 && as_of >= s.deadline_to_initiate;
        let active = !expired && !due;
        prop_assert_eq!([expired, due, active].iter().filter(|b| **b).count(), 1);
        let expected = if expired { ExpiryPhase::Expired } else if due { ExpiryPhase::InitiationDue } else { ExpiryPhase::Active };
        prop_assert_eq!(s.phase, expected);
        prop_assert_eq!(s.deadline_to_initiate, subtract_months(valid_to, 3));
    }
}
