use std::sync::Arc;

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use chrono::NaiveDate;
use hrm_core::bibliography::{PublicationRecord, SyncReport};
use hrm_core::expiry::{write_review_csv, ExpiryNotification, ReviewRow};
use hrm_core::registry::{MinistryDecision, RegistryApplication, RegistryCategory, RegistryEntry};
use hrm_core::triage::{export_csv, render_grouped, Requirement};
use hrm_core::vault::{AttachedDocument, OwnerRef, ResolvedDocument};
use hrm_core::{ApplicationId, DocumentId, Error, PersonId, ProcedureId};
use serde::{Deserialize, Serialize};

use super::{blocking, created, text, Actor, Body, Path, Query, Shared};
use crate::app::App;
use crate::error::ApiError;

// --- expiry ---

#[derive(Debug, Default, Deserialize)]
pub struct ReviewQuery {
    pub as_of: Option<NaiveDate>,
    pub format: Option<String>,
}

pub async fn expiry_review(
    _: Actor,
    State(app): State<Shared>,
    Query(q): Query<ReviewQuery>,
) -> Result<Response, ApiError> {
    let rows: Vec<ReviewRow> = app
        .store
        .read(|h| h.expiry_review(q.as_of.unwrap_or_else(|| h.clock().today())));
    match q.format.as_deref() {
        None | Some("json") => Ok(Json(rows).into_response()),
        Some("csv") => {
            let mut buf = Vec::new();
            write_review_csv(&rows, &mut buf)?;
            Ok(text("text/csv", String::from_utf8_lossy(&buf).into_owned()))
        }
        Some(other) => Err(ApiError::BadRequest(format!("unknown format {other:?}"))),
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub as_of: Option<NaiveDate>,
}

pub async fn generate_review(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Body(body): Body<GenerateRequest>,
) -> Result<Json<Vec<ExpiryNotification>>, ApiError> {
    let generated = app
        .store
        .mutate(&actor, "generate_review", "notifications", |h| {
            let as_of = body.as_of.unwrap_or_else(|| h.clock().today());
            Ok(h.generate_review(as_of))
        })?;
    Ok(Json(generated))
}

pub async fn notifications(_: Actor, State(app): State<Shared>) -> Json<Vec<ExpiryNotification>> {
    Json(app.store.read(|h| h.state().notifications.all().to_vec()))
}

// --- registry ---

pub async fn categories(_: Actor) -> Json<Vec<&'static str>> {
    Json(
        RegistryCategory::ALL
            .iter()
            .map(|c| c.canonical_name())
            .collect(),
    )
}

pub async fn list_applications(
    _: Actor,
    State(app): State<Shared>,
) -> Json<Vec<RegistryApplication>> {
    Json(
        app.store
            .read(|h| h.state().register.applications().cloned().collect()),
    )
}

pub async fn get_application(
    _: Actor,
    State(app): State<Shared>,
    Path(id): Path<u64>,
) -> Result<Json<RegistryApplication>, ApiError> {
    Ok(Json(app.store.read(|h| {
        h.state().register.application(ApplicationId(id)).cloned()
    })?))
}

pub async fn entries(_: Actor, State(app): State<Shared>) -> Json<Vec<RegistryEntry>> {
    Json(
        app.store
            .read(|h| h.state().register.entries().cloned().collect()),
    )
}

/// Sends an application to the ministry unless it already has an
/// acknowledgment. Holding the application's lock across the call keeps
/// two forwards of the same application from both reaching the ministry.
async fn forward(app: &Arc<App>, id: ApplicationId) -> hrm_core::Result<RegistryApplication> {
    let _guard = app.locks.lock(format!("application:{}", id.0)).await;
    let pending = app.store.read(|h| {
        let current = h.state().register.application(id)?;
        match current.ministry_ack {
            Some(_) => Ok(Err(current.clone())),
            None => h.ministry_submission(id).map(Ok),
        }
    })?;
    let submission = match pending {
        Ok(submission) => submission,
        Err(already) => return Ok(already),
    };
    let ministry = Arc::clone(&app.ministry);
    let ack = blocking(move || ministry.submit(&submission)).await?;
    app.store.write(|h| h.record_forwarding(id, ack.ack))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NewApplication {
    pub person_id: PersonId,
    pub category: String,
    #[serde(default)]
    pub documents: Vec<String>,
}

/// Stores the application and forwards it. If the ministry cannot be
/// reached the application stays stored, unforwarded, and the response is
/// the transport error; `POST .../forward` retries.
pub async fn submit_application(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Body(body): Body<NewApplication>,
) -> Result<Response, ApiError> {
    const OP: &str = "submit_registration";
    let submitted = app
        .store
        .write(|h| h.submit_registration(body.person_id, &body.category, body.documents));
    let result = match submitted {
        Ok(application) => forward(&app, application.application_id).await,
        Err(e) => Err(e),
    };
    let application = app
        .store
        .record(&actor, OP, "registry/applications", result)?;
    Ok(created(application))
}

pub async fn forward_application(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Path(id): Path<u64>,
) -> Result<Json<RegistryApplication>, ApiError> {
    let id = ApplicationId(id);
    let result = forward(&app, id).await;
    Ok(Json(app.store.record(
        &actor,
        "forward_application",
        &id.to_string(),
        result,
    )?))
}

pub async fn record_decision(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Path(id): Path<u64>,
    Body(decision): Body<MinistryDecision>,
) -> Result<Json<RegistryApplication>, ApiError> {
    let id = ApplicationId(id);
    Ok(Json(app.store.mutate(
        &actor,
        "record_ministry_decision",
        &id.to_string(),
        |h| h.record_ministry_decision(id, decision),
    )?))
}

pub async fn poll_application(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Path(id): Path<u64>,
) -> Result<Json<RegistryApplication>, ApiError> {
    let id = ApplicationId(id);
    let result = async {
        let _guard = app.locks.lock(format!("application:{}", id.0)).await;
        app.store
            .read(|h| h.state().register.application(id).map(|_| ()))?;
        let ministry = Arc::clone(&app.ministry);
        match blocking(move || ministry.poll_decision(id))
            .await?
            .into_decision()
        {
            Some(decision) => app
                .store
                .write(|h| h.record_ministry_decision(id, decision)),
            None => app
                .store
                .read(|h| h.state().register.application(id).cloned()),
        }
    }
    .await;
    Ok(Json(app.store.record(
        &actor,
        "poll_ministry",
        &id.to_string(),
        result,
    )?))
}

// --- publications ---

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuthorMapping {
    pub author_id: String,
}

pub async fn author(
    _: Actor,
    State(app): State<Shared>,
    Path(person): Path<u64>,
) -> Result<Json<AuthorMapping>, ApiError> {
    let author_id = app.store.read(|h| h.author_of(PersonId(person)))?;
    Ok(Json(AuthorMapping { author_id }))
}

pub async fn map_author(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Path(person): Path<u64>,
    Body(body): Body<AuthorMapping>,
) -> Result<Json<AuthorMapping>, ApiError> {
    let person = PersonId(person);
    app.store
        .mutate(&actor, "map_author", &person.to_string(), |h| {
            h.map_author(person, &body.author_id)
        })?;
    Ok(Json(body))
}

/// Fetches the person's records and merges them in. Syncs of one person
/// are serialized; the store is not locked while the archive answers.
pub async fn sync(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Path(person): Path<u64>,
) -> Result<Json<SyncReport>, ApiError> {
    let person = PersonId(person);
    let result = async {
        let _guard = app.locks.lock(format!("person:{}", person.0)).await;
        let author = app.store.read(|h| h.author_of(person))?;
        let source = Arc::clone(&app.bibliography);
        let remote = blocking(move || source.fetch(&author)).await?;
        app.store.write(|h| h.apply_sync(person, remote))
    }
    .await;
    Ok(Json(app.store.record(
        &actor,
        "sync_publications",
        &person.to_string(),
        result,
    )?))
}

#[derive(Debug, Default, Deserialize)]
pub struct PublicationFilter {
    pub type_of_work: Option<String>,
}

pub async fn publications(
    _: Actor,
    State(app): State<Shared>,
    Path(person): Path<u64>,
    Query(filter): Query<PublicationFilter>,
) -> Result<Json<Vec<PublicationRecord>>, ApiError> {
    let person = PersonId(person);
    Ok(Json(app.store.read(|h| {
        h.person(person)?;
        Ok::<_, Error>(h.list_publications(person, filter.type_of_work.as_deref()))
    })?))
}

pub async fn remove_publication(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Path((person, key)): Path<(u64, String)>,
) -> Result<Json<PublicationRecord>, ApiError> {
    let person = PersonId(person);
    let target = format!("{person}/{key}");
    Ok(Json(app.store.mutate(
        &actor,
        "remove_publication",
        &target,
        |h| h.remove_publication(person, &key),
    )?))
}

// --- documents ---

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NewDocument {
    pub owner: OwnerRef,
    pub path: String,
    #[serde(default)]
    pub declared_format: String,
    #[serde(default)]
    pub description: String,
}

pub async fn attach(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Body(body): Body<NewDocument>,
) -> Result<Response, ApiError> {
    let doc = app
        .store
        .mutate(&actor, "attach_document", "documents", |h| {
            h.attach(
                body.owner,
                &body.path,
                &body.declared_format,
                &body.description,
            )
        })?;
    Ok(created(doc))
}

#[derive(Debug, Deserialize)]
pub struct OwnerQuery {
    pub owner_kind: String,
    pub owner_id: u64,
}

impl OwnerQuery {
    fn owner(&self) -> Result<OwnerRef, ApiError> {
        match self.owner_kind.as_str() {
            "procedure" => Ok(OwnerRef::Procedure(ProcedureId(self.owner_id))),
            "registry_application" => {
                Ok(OwnerRef::RegistryApplication(ApplicationId(self.owner_id)))
            }
            "employee" => Ok(OwnerRef::Employee(PersonId(self.owner_id))),
            other => Err(ApiError::BadRequest(format!(
                "unknown owner kind {other:?}"
            ))),
        }
    }
}

pub async fn list_documents(
    _: Actor,
    State(app): State<Shared>,
    Query(q): Query<OwnerQuery>,
) -> Result<Json<Vec<AttachedDocument>>, ApiError> {
    let owner = q.owner()?;
    Ok(Json(app.store.read(|h| {
        if !h.owner_exists(owner) {
            return Err(Error::OwnerNotFound(owner));
        }
        Ok(h.list_attachments(owner))
    })?))
}

pub async fn resolve(
    _: Actor,
    State(app): State<Shared>,
    Path(id): Path<u64>,
) -> Result<Json<ResolvedDocument>, ApiError> {
    Ok(Json(app.store.read(|h| h.resolve(DocumentId(id)))?))
}

pub async fn detach(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Path(id): Path<u64>,
) -> Result<Json<AttachedDocument>, ApiError> {
    let id = DocumentId(id);
    Ok(Json(app.store.mutate(
        &actor,
        "detach_document",
        &id.to_string(),
        |h| h.detach(id),
    )?))
}

// --- requirements ---

pub async fn requirements(_: Actor, State(app): State<Shared>) -> Json<Vec<Requirement>> {
    Json(app.store.read(|h| h.state().requirements.all().to_vec()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NewRequirement {
    pub text: String,
    pub category: String,
    pub priority: String,
}

pub async fn add_requirement(
    Actor(actor): Actor,
    State(app): State<Shared>,
    Body(body): Body<NewRequirement>,
) -> Result<Response, ApiError> {
    let req = app
        .store
        .mutate(&actor, "add_requirement", "requirements", |h| {
            h.add_requirement(&body.text, &body.category, &body.priority)
        })?;
    Ok(created(req))
}

#[derive(Debug, Default, Deserialize)]
pub struct FormatQuery {
    pub format: Option<String>,
}

pub async fn backlog(
    _: Actor,
    State(app): State<Shared>,
    Query(q): Query<FormatQuery>,
) -> Result<Response, ApiError> {
    let backlog = app.store.read(|h| h.backlog());
    match q.format.as_deref() {
        None | Some("json") => Ok(Json(backlog).into_response()),
        Some("text") => Ok(text("text/plain; charset=utf-8", render_grouped(&backlog))),
        Some(other) => Err(ApiError::BadRequest(format!("unknown format {other:?}"))),
    }
}

pub async fn export_requirements(
    _: Actor,
    State(app): State<Shared>,
) -> Result<Response, ApiError> {
    let all = app.store.read(|h| h.state().requirements.all().to_vec());
    let mut buf = Vec::new();
    export_csv(&all, &mut buf)?;
    Ok(text("text/csv", String::from_utf8_lossy(&buf).into_owned()))
}

pub async fn import_requirements(
    Actor(actor): Actor,
    State(app): State<Shared>,
    csv: String,
) -> Result<Response, ApiError> {
    let added = app
        .store
        .mutate(&actor, "import_requirements", "requirements", |h| {
            h.import_requirements(&csv)
        })?;
    Ok((StatusCode::CREATED, Json(added)).into_response())
}
