use axum::extract::State;
use axum::response::Response;
use axum::Json;
use chrono::NaiveDate;
use hrm_core::people::{Employee, Person};
use hrm_core::taxonomy::{catalog, AcademicGrade};
use hrm_core::PersonId;
use serde::{Deserialize, Serialize};

use super::{created, Actor, Body, Path, Shared};
use crate::error::ApiError;
use crate::import::{import_employees as run_import, ImportReport};
use crate::seed::{seed_demo as run_seed, SeedSummary};
use crate::store::AuditEntry;

#[derive(Debug, Serialize, Deserialize)]
pub struct Readiness {
    pub status: String,
    pub grades: usize,
    pub persistent: bool,
}

pub async fn ready(State(app): State<Shared>) -> Json<Readiness> {
    Json(Readiness {
        status: "ready".into(),
        grades: app.grades_loaded,
        persistent: app.store.path().is_some(),
    })
}

pub async fn audit(_: Actor, State(app): State<Shared>) -> Json<Vec<AuditEntry>> {
    Json(app.store.audit())
}

pub async fn grades(_: Actor) -> Json<Vec<AcademicGrade>> {
    Json(catalog().collect())
}

pub async fn list_persons(_: Actor, State(app): State<Shared>) -> Json<Vec<Person>> {
    Json(
        app.store
            .read(|h| h.state().directory.persons().cloned().collect()),
    )
}

pub async fn get_person(
    _: Actor,
    State(app): State<Shared>,
    Path(id): Path<u64>,
) -> Result<Json<Person>, ApiError> {
    Ok(Json(app.store.read(|h| h.person(PersonId(id)).cloned())?))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NewPerson {
    pub full_name: String,
    pub date_of_birth: NaiveDate,
    #[serde(default)]
    pub doctoral_degree: bool,
}

pub async fn register_person(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Body(body): Body<NewPerson>,
) -> Result<Response, ApiError> {
    let person = app
        .store
        .mutate(&actor, "register_person", "persons", |h| {
            h.register_person(&body.full_name, body.date_of_birth, body.doctoral_degree)
        })?;
    Ok(created(person))
}

pub async fn list_employees(_: Actor, State(app): State<Shared>) -> Json<Vec<Employee>> {
    Json(
        app.store
            .read(|h| h.state().directory.employees().cloned().collect()),
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NewEmployee {
    pub person_id: PersonId,
    pub staff_group: String,
    pub employment_start: NaiveDate,
}

pub async fn hire(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Body(body): Body<NewEmployee>,
) -> Result<Response, ApiError> {
    let target = body.person_id.to_string();
    let employee = app.store.mutate(&actor, "hire", &target, |h| {
        h.hire(
            body.person_id,
            body.staff_group.parse()?,
            body.employment_start,
        )
    })?;
    Ok(created(employee))
}

pub async fn import_employees(
    Actor(actor): Actor,
    State(app): State<Shared>,
    csv: String,
) -> Result<Json<ImportReport>, ApiError> {
    Ok(Json(app.store.mutate(
        &actor,
        "import_employees",
        "employees",
        |h| run_import(h, &csv),
    )?))
}

pub async fn seed_demo(
    Actor(actor): Actor,
    State(app): State<Shared>,
) -> Result<Json<SeedSummary>, ApiError> {
    Ok(Json(app.store.mutate(
        &actor,
        "seed_demo",
        "store",
        run_seed,
    )?))
}
