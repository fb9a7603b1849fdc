mod support;

use std::cmp::Ordering;

use hrm_core::taxonomy::{catalog, classify_grade, compare_seniority, normalize, GradeTrack};
use hrm_core::triage::{
    prioritized_backlog, FurpsCategory, Priority, Requirement, RequirementKind,
};
use hrm_core::{Clock, RequirementId};
use hrm_oracles::sort::stable_sort_by_key;
use proptest::prelude::*;

#[test]
fn every_catalog_entry_round_trips() {
    let mut count = 0;
    for grade in catalog() {
        let found = classify_grade(grade.name()).unwrap();
        assert!(found.contains(&grade), "{grade}");
        let upper = grade.name().to_uppercase().replace(' ', "   ");
        assert_eq!(classify_grade(&upper).unwrap(), found);
        count += 1;
    }
    assert_eq!(count, 3 + 4 + 4 + 7 + 5);
}

#[test]
fn seniority_is_a_strict_total_order_per_track() {
    for track in GradeTrack::ALL {
        let grades: Vec<_> = catalog().filter(|g| g.track() == track).collect();
        for a in &grades {
            for b in &grades {
                let ab = compare_seniority(a, b).unwrap();
                let ba = compare_seniority(b, a).unwrap();
                assert_eq!(ab, ba.reverse(), "antisymmetry {a} {b}");
                assert_eq!(ab == Ordering::Equal, a == b, "totality {a} {b}");
                for c in &grades {
                    if ab == Ordering::Less && compare_seniority(b, c).unwrap() == Ordering::Less {
                        assert_eq!(
                            compare_seniority(a, c).unwrap(),
                            Ordering::Less,
                            "transitivity"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn cross_track_comparison_is_refused() {
    for a in catalog() {
        for b in catalog().filter(|b| b.track() != a.track()) {
            assert!(compare_seniority(&a, &b).is_err());
        }
    }
}

proptest! {
    #[test]
    fn classification_is_idempotent_under_normalization(name in "[A-Za-z ]{0,30}") {
        prop_assert_eq!(classify_grade(&normalize(&name)), classify_grade(&name));
    }

    #[test]
    fn non_catalog_names_are_rejected(name in "[a-z]{1,12}( [a-z]{1,12})?") {
        let known = catalog().any(|g| g.name() == name);
        prop_assert_eq!(classify_grade(&name).is_ok(), known);
    }
}

fn requirement(id: u64, priority: Priority) -> Requirement {
    Requirement {
        requirement_id: RequirementId(id),
        text: format!("req {id}"),
        kind: RequirementKind::NonFunctional,
        category: FurpsCategory::Usability,
        priority,
        created_at: support::clock().now(),
    }
}

proptest! {
    #[test]
    fn backlog_is_the_reference_stable_sort(prios in prop::collection::vec(0usize..4, 0..40)) {
        let input: Vec<_> = prios.iter().enumerate().map(|(i, p)| requirement(i as u64, Priority::ALL[*p])).collect();
        let ours = prioritized_backlog(&input);
        let reference = stable_sort_by_key(&input, |r| prios[r.requirement_id.0 as usize]);
        prop_assert_eq!(&ours, &reference);
        prop_assert!(ours.windows(2).all(|w| w[0].priority <= w[1].priority));
    }
}
