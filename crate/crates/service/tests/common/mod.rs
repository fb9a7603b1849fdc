#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use chrono::{NaiveDate, TimeZone, Utc};
use hrm_core::bibliography::FixtureBibliography;
use hrm_core::ministry::{MinistryClient, StubMinistry};
use hrm_core::taxonomy::GradeTrack;
use hrm_core::vault::OwnerRef;
use hrm_core::workflow::{EventKind, ProcedureState};
use hrm_core::{ApplicationId, AppointmentId, Clock, Error, Guard, ManualClock, PersonId, Policy};
use hrm_service::api;
use hrm_service::store::Store;
use hrm_service::App;
use serde::de::DeserializeOwned;
use serde_json::Value;
use tower::ServiceExt;

pub const TOKEN: &str = "test-token";
pub const ACTOR: &str = "officer";

pub fn d(y: i32, m: u32, day: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, day).unwrap()
}

pub fn clock() -> Arc<ManualClock> {
    Arc::new(ManualClock::new(
        Utc.with_ymd_and_hms(2024, 6, 3, 10, 0, 0).unwrap(),
    ))
}

pub struct Harness {
    pub app: Arc<App>,
    pub router: Router,
    pub ministry: Arc<StubMinistry>,
    pub bibliography: Arc<FixtureBibliography>,
    pub clock: Arc<ManualClock>,
}

impl Harness {
    pub fn new() -> Self {
        Self::with_ministry(None)
    }

    /// In-memory store with in-process stand-ins, or an explicit ministry
    /// client (for example one talking to an HTTP stub).
    pub fn with_ministry(ministry: Option<Arc<dyn MinistryClient>>) -> Self {
        let clock = clock();
        let stub = Arc::new(StubMinistry::new());
        let bibliography = Arc::new(FixtureBibliography::new());
        let ministry = ministry.unwrap_or_else(|| Arc::clone(&stub) as Arc<dyn MinistryClient>);
        let store =
            Store::in_memory(Policy::default(), Arc::clone(&clock) as Arc<dyn Clock>).unwrap();
        let tokens = BTreeMap::from([(TOKEN.to_string(), ACTOR.to_string())]);
        let app = Arc::new(App::new(
            store,
            tokens,
            ministry,
            Arc::clone(&bibliography) as _,
        ));
        let router = api::router(Arc::clone(&app));
        Self {
            app,
            router,
            ministry: stub,
            bibliography,
            clock,
        }
    }

    pub async fn send(
        &self,
        method: Method,
        path: &str,
        body: Option<Value>,
        headers: &[(&str, &str)],
    ) -> Reply {
        send(&self.router, method, path, body, headers).await
    }

    pub async fn get(&self, path: &str) -> Reply {
        self.send(Method::GET, path, None, &[]).await
    }

    pub async fn post(&self, path: &str, body: Value) -> Reply {
        self.send(Method::POST, path, Some(body), &[]).await
    }

    pub async fn event(&self, procedure: u64, version: u64, event: Value) -> Reply {
        let v = version.to_string();
        self.send(
            Method::POST,
            &format!("/procedures/{procedure}/events"),
            Some(event),
            &[("x-expected-version", &v)],
        )
        .await
    }
}

pub async fn send(
    router: &Router,
    method: Method,
    path: &str,
    body: Option<Value>,
    headers: &[(&str, &str)],
) -> Reply {
    let mut request = Request::builder()
        .method(method)
        .uri(path)
        .header("authorization", format!("Bearer {TOKEN}"));
    for (k, v) in headers {
        request = request.header(*k, *v);
    }
    let request = match body {
        Some(Value::String(raw)) => request
            .header("content-type", "text/csv")
            .body(Body::from(raw)),
        Some(json) => request
            .header("content-type", "application/json")
            .body(Body::from(json.to_string())),
        None => request.body(Body::empty()),
    }
    .unwrap();
    let response = router.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = axum::body::to_bytes(response.into_body(), usize::MAX)
        .await
        .unwrap();
    Reply {
        status,
        text: String::from_utf8(bytes.to_vec()).unwrap(),
    }
}

#[derive(Debug)]
pub struct Reply {
    pub status: StatusCode,
    pub text: String,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.text).unwrap_or_else(|e| panic!("not json ({e}): {}", self.text))
    }

    pub fn parse<T: DeserializeOwned>(&self) -> T {
        serde_json::from_str(&self.text)
            .unwrap_or_else(|e| panic!("unexpected body ({e}): {}", self.text))
    }

    pub fn code(&self) -> String {
        self.json()["error"]
            .as_str()
            .unwrap_or_default()
            .to_string()
    }

    #[track_caller]
    pub fn expect(self, status: StatusCode) -> Self {
        assert_eq!(self.status, status, "{}", self.text);
        self
    }
}

/// One value per variant. The match below has no wildcard, so adding a
/// variant breaks the build until it is listed here.
pub fn error_samples() -> Vec<Error> {
    fn index(e: &Error) -> usize {
        match e {
            Error::NotFound { .. } => 0,
            Error::Validation(_) => 1,
            Error::UnknownGrade(_) => 2,
            Error::TrackMismatch { .. } => 3,
            Error::InvalidTrack(_) => 4,
            Error::IllegalTransition { .. } => 5,
            Error::GuardViolation(_) => 6,
            Error::VersionConflict { .. } => 7,
            Error::NonExpiring(_) => 8,
            Error::AlreadyRegistered(_) => 9,
            Error::CategoryNotRegistrable(_) => 10,
            Error::MissingDoctorate(_) => 11,
            Error::AlreadyDecided(_) => 12,
            Error::DuplicateScientistId(_) => 13,
            Error::NoAuthorMapping(_) => 14,
            Error::Transport(_) => 15,
            Error::Protocol(_) => 16,
            Error::OwnerNotFound(_) => 17,
            Error::EmptyPath => 18,
        }
    }
    let all = vec![
        Error::not_found("person", 1),
        Error::Validation("v".into()),
        Error::UnknownGrade("g".into()),
        Error::TrackMismatch {
            left: GradeTrack::Teaching,
            right: GradeTrack::Associate,
        },
        Error::InvalidTrack(GradeTrack::Scientist),
        Error::IllegalTransition {
            state: ProcedureState::Recognized,
            event: EventKind::Terminate,
        },
        Error::GuardViolation(Guard::AppointmentOverlap),
        Error::VersionConflict {
            expected: 1,
            actual: 2,
        },
        Error::NonExpiring(AppointmentId(1)),
        Error::AlreadyRegistered(PersonId(1)),
        Error::CategoryNotRegistrable("c".into()),
        Error::MissingDoctorate(PersonId(1)),
        Error::AlreadyDecided(ApplicationId(1)),
        Error::DuplicateScientistId("1".into()),
        Error::NoAuthorMapping(PersonId(1)),
        Error::Transport("t".into()),
        Error::Protocol("p".into()),
        Error::OwnerNotFound(OwnerRef::Employee(PersonId(1))),
        Error::EmptyPath,
    ];
    let indices: Vec<_> = all.iter().map(index).collect();
    assert_eq!(
        indices,
        (0..all.len()).collect::<Vec<_>>(),
        "one sample per variant, in order"
    );
    all
}

/// Expected code and status for each of [`error_samples`], in order.
pub const ERROR_TABLE: &[(&str, u16)] = &[
    ("not_found", 404),
    ("validation_error", 422),
    ("unknown_grade", 422),
    ("track_mismatch", 422),
    ("invalid_track", 422),
    ("illegal_transition", 422),
    ("guard_violation", 422),
    ("version_conflict", 409),
    ("non_expiring", 422),
    ("already_registered", 409),
    ("category_not_registrable", 422),
    ("missing_doctorate", 422),
    ("already_decided", 409),
    ("duplicate_scientist_id", 409),
    ("no_author_mapping", 422),
    ("transport_error", 502),
    ("protocol_error", 502),
    ("owner_not_found", 404),
    ("empty_path", 422),
];
