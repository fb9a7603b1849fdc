use axum::extract::State;
use axum::http::HeaderMap;
use axum::response::Response;
use axum::Json;
use hrm_core::taxonomy::{AcademicGrade, GradeTrack};
use hrm_core::workflow::{
    transition, AppointmentProcedure, EventKind, GradeAppointment, ProcedureEvent, ProcedureState,
};
use hrm_core::{PersonId, ProcedureId};
use serde::{Deserialize, Serialize};

use super::{created, text, Actor, Body, Path, Query, Shared};
use crate::error::ApiError;

pub const VERSION_HEADER: &str = "x-expected-version";

/// A procedure plus what may happen to it next.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcedureView {
    #[serde(flatten)]
    pub procedure: AppointmentProcedure,
    pub state: ProcedureState,
    pub legal_events: Vec<EventKind>,
}

impl From<AppointmentProcedure> for ProcedureView {
    fn from(procedure: AppointmentProcedure) -> Self {
        let state = procedure.state();
        Self {
            procedure,
            state,
            legal_events: state.legal_events(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub from: ProcedureState,
    pub event: EventKind,
    pub to: ProcedureState,
}

pub async fn transitions(_: Actor) -> Json<Vec<Transition>> {
    let table = ProcedureState::ALL
        .into_iter()
        .flat_map(|from| EventKind::ALL.into_iter().map(move |event| (from, event)))
        .filter_map(|(from, event)| {
            transition(from, event).map(|to| Transition { from, event, to })
        })
        .collect();
    Json(table)
}

pub async fn list(_: Actor, State(app): State<Shared>) -> Json<Vec<ProcedureView>> {
    Json(app.store.read(|h| {
        h.state()
            .procedures
            .all()
            .cloned()
            .map(ProcedureView::from)
            .collect()
    }))
}

pub async fn get(
    _: Actor,
    State(app): State<Shared>,
    Path(id): Path<u64>,
) -> Result<Json<ProcedureView>, ApiError> {
    Ok(Json(
        app.store
            .read(|h| h.procedure(ProcedureId(id)).cloned())?
            .into(),
    ))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NewProcedure {
    pub grade: String,
    pub track: String,
    pub council_ref: String,
}

pub async fn open(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Body(body): Body<NewProcedure>,
) -> Result<Response, ApiError> {
    let procedure = app
        .store
        .mutate(&actor, "open_procedure", "procedures", |h| {
            let grade = AcademicGrade::lookup(&body.grade, body.track.parse::<GradeTrack>()?)?;
            h.open_procedure(grade, &body.council_ref, &actor)
        })?;
    Ok(created(ProcedureView::from(procedure)))
}

fn expected_version(headers: &HeaderMap) -> Result<u64, ApiError> {
    let raw = headers
        .get(VERSION_HEADER)
        .ok_or(ApiError::VersionRequired)?;
    raw.to_str()
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| {
            ApiError::BadRequest(format!("{VERSION_HEADER} must be a non-negative integer"))
        })
}

pub async fn advance(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Path(id): Path<u64>,
    headers: HeaderMap,
    Body(event): Body<ProcedureEvent>,
) -> Result<Json<ProcedureView>, ApiError> {
    let version = expected_version(&headers)?;
    let id = ProcedureId(id);
    let procedure = app
        .store
        .mutate(&actor, "advance_procedure", &id.to_string(), |h| {
            h.advance(id, event, version, &actor)
        })?;
    Ok(Json(procedure.into()))
}

pub async fn log(
    _: Actor,
    State(app): State<Shared>,
    Path(id): Path<u64>,
) -> Result<Response, ApiError> {
    let log = app.store.read(|h| {
        h.procedure(ProcedureId(id))
            .map(AppointmentProcedure::export_log)
    })?;
    Ok(text("application/x-ndjson", log))
}

pub async fn manifest(
    _: Actor,
    State(app): State<Shared>,
    Path(id): Path<u64>,
) -> Result<Response, ApiError> {
    let csv = app.store.read(|h| h.procedure_manifest(ProcedureId(id)))?;
    Ok(text("text/csv", csv))
}

#[derive(Debug, Default, Deserialize)]
pub struct AppointmentFilter {
    pub person_id: Option<PersonId>,
}

pub async fn appointments(
    _: Actor,
    State(app): State<Shared>,
    Query(filter): Query<AppointmentFilter>,
) -> Json<Vec<GradeAppointment>> {
    Json(app.store.read(|h| {
        h.appointments()
            .filter(|a| filter.person_id.is_none_or(|p| a.person_id == p))
            .cloned()
            .collect()
    }))
}
