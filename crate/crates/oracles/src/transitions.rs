//! A table-driven interpreter for the appointment procedure, written as a
//! flat list of `(from, event, to)` triples.

pub const STATES: [&str; 10] = [
    "Initiated",
    "CommitteeSelected",
    "VacancyAnnounced",
    "AcceptingApplications",
    "ApplicationsClosed",
    "ReportSubmitted",
    "BoardDecided",
    "SenateConfirmed",
    "Recognized",
    "Terminated",
];

pub const EVENTS: [&str; 10] = [
    "InitiateDecision",
    "SelectCommittee",
    "AnnounceVacancy",
    "ReceiveApplication",
    "CloseApplications",
    "SubmitReport",
    "BoardDecision",
    "SenateConfirmation",
    "RecognizeAppointments",
    "Terminate",
];

pub const TERMINAL: [&str; 2] = ["Recognized", "Terminated"];

const TABLE: [(&str, &str, &str); 10] = [
    ("Initiated", "SelectCommittee", "CommitteeSelected"),
    ("CommitteeSelected", "AnnounceVacancy", "VacancyAnnounced"),
    (
        "VacancyAnnounced",
        "ReceiveApplication",
        "AcceptingApplications",
    ),
    (
        "AcceptingApplications",
        "ReceiveApplication",
        "AcceptingApplications",
    ),
    (
        "AcceptingApplications",
        "CloseApplications",
        "ApplicationsClosed",
    ),
    (
        "VacancyAnnounced",
        "CloseApplications",
        "ApplicationsClosed",
    ),
    ("ApplicationsClosed", "SubmitReport", "ReportSubmitted"),
    ("ReportSubmitted", "BoardDecision", "BoardDecided"),
    ("BoardDecided", "SenateConfirmation", "SenateConfirmed"),
    ("SenateConfirmed", "RecognizeAppointments", "Recognized"),
];

pub fn step(state: &str, event: &str) -> Option<&'static str> {
    if event == "Terminate" {
        return if TERMINAL.contains(&state) {
            None
        } else {
            Some("Terminated")
        };
    }
    TABLE
        .iter()
        .find(|(from, ev, _)| *from == state && *ev == event)
        .map(|(_, _, to)| *to)
}

/// Runs a full event string, which must start with `InitiateDecision`.
/// Returns the final state, or the index of the first rejected event.
pub fn run(events: &[&str]) -> Result<&'static str, usize> {
    match events.first() {
        Some(&"InitiateDecision") => {}
        _ => return Err(0),
    }
    let mut state = "Initiated";
    for (i, ev) in events.iter().enumerate().skip(1) {
        state = step(state, ev).ok_or(i)?;
    }
    Ok(state)
}

/// Legal events from a state, in `EVENTS` order.
pub fn legal_events(state: &str) -> Vec<&'static str> {
    EVENTS
        .iter()
        .copied()
        .filter(|e| step(state, e).is_some())
        .collect()
}

/// Whether a full event string follows the only admissible path to
/// recognition: committee, announcement, any number of applications,
/// closing, report, board, senate, recognition.
pub fn is_recognition_path(events: &[&str]) -> bool {
    let mut rest = events;
    for expected in ["InitiateDecision", "SelectCommittee", "AnnounceVacancy"] {
        match rest.split_first() {
            Some((e, tail)) if *e == expected => rest = tail,
            _ => return false,
        }
    }
    while let Some((&"ReceiveApplication", tail)) = rest.split_first() {
        rest = tail;
    }
    rest == [
        "CloseApplications",
        "SubmitReport",
        "BoardDecision",
        "SenateConfirmation",
        "RecognizeAppointments",
    ]
}
