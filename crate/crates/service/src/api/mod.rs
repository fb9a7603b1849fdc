//! HTTP/JSON surface. Every route except `/health/ready` needs a bearer
//! token; the token's actor is recorded on every mutation.

use std::sync::Arc;

use axum::extract::{FromRequest, FromRequestParts, Request};
use axum::http::header::{AUTHORIZATION, CONTENT_TYPE};
use axum::http::request::Parts;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;

use crate::app::App;
use crate::error::ApiError;

mod people;
mod procedures;
mod records;

pub use procedures::{ProcedureView, Transition, VERSION_HEADER};

pub type Shared = Arc<App>;

pub fn router(app: Shared) -> Router {
    Router::new()
        .route("/health/ready", get(people::ready))
        .route("/audit", get(people::audit))
        .route("/grades", get(people::grades))
        .route(
            "/persons",
            get(people::list_persons).post(people::register_person),
        )
        .route("/persons/{id}", get(people::get_person))
        .route("/employees", get(people::list_employees).post(people::hire))
        .route("/employees/import", post(people::import_employees))
        .route("/admin/seed-demo", post(people::seed_demo))
        .route("/workflow/transitions", get(procedures::transitions))
        .route("/procedures", get(procedures::list).post(procedures::open))
        .route("/procedures/{id}", get(procedures::get))
        .route("/procedures/{id}/events", post(procedures::advance))
        .route("/procedures/{id}/log", get(procedures::log))
        .route("/procedures/{id}/manifest", get(procedures::manifest))
        .route("/appointments", get(procedures::appointments))
        .route("/expiry-review", get(records::expiry_review))
        .route("/expiry-review/generate", post(records::generate_review))
        .route("/expiry-review/notifications", get(records::notifications))
        .route("/registry/categories", get(records::categories))
        .route(
            "/registry/applications",
            get(records::list_applications).post(records::submit_application),
        )
        .route("/registry/applications/{id}", get(records::get_application))
        .route(
            "/registry/applications/{id}/forward",
            post(records::forward_application),
        )
        .route(
            "/registry/applications/{id}/decision",
            post(records::record_decision),
        )
        .route(
            "/registry/applications/{id}/poll",
            post(records::poll_application),
        )
        .route("/registry/entries", get(records::entries))
        .route(
            "/publications/authors/{person}",
            get(records::author).put(records::map_author),
        )
        .route("/publications/sync/{person}", post(records::sync))
        .route("/publications/{person}", get(records::publications))
        .route(
            "/publications/{person}/{key}",
            delete(records::remove_publication),
        )
        .route(
            "/documents",
            get(records::list_documents).post(records::attach),
        )
        .route(
            "/documents/{id}",
            get(records::resolve).delete(records::detach),
        )
        .route(
            "/requirements",
            get(records::requirements).post(records::add_requirement),
        )
        .route("/requirements/backlog", get(records::backlog))
        .route("/requirements/export", get(records::export_requirements))
        .route("/requirements/import", post(records::import_requirements))
        .fallback(|| async { ApiError::Domain(hrm_core::Error::not_found("route", "requested")) })
        .with_state(app)
}

/// The authenticated caller.
pub struct Actor(pub String);

impl FromRequestParts<Shared> for Actor {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, app: &Shared) -> Result<Self, ApiError> {
        let token = parts
            .headers
            .get(AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "))
            .ok_or(ApiError::Unauthorized)?;
        app.actor_for(token.trim())
            .map(|a| Actor(a.to_string()))
            .ok_or(ApiError::Unauthorized)
    }
}

/// JSON body whose rejections come back as structured errors.
pub struct Body<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for Body<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, ApiError> {
        Json::<T>::from_request(req, state)
            .await
            .map(|Json(v)| Body(v))
            .map_err(|e| ApiError::BadRequest(e.body_text()))
    }
}

pub struct Path<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned + Send> FromRequestParts<S> for Path<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, ApiError> {
        axum::extract::Path::<T>::from_request_parts(parts, state)
            .await
            .map(|axum::extract::Path(v)| Path(v))
            .map_err(|e| ApiError::BadRequest(e.body_text()))
    }
}

pub struct Query<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequestParts<S> for Query<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, ApiError> {
        axum::extract::Query::<T>::from_request_parts(parts, state)
            .await
            .map(|axum::extract::Query(v)| Query(v))
            .map_err(|e| ApiError::BadRequest(e.body_text()))
    }
}

pub(crate) fn created<T: serde::Serialize>(value: T) -> Response {
    (StatusCode::CREATED, Json(value)).into_response()
}

pub(crate) fn text(content_type: &'static str, body: String) -> Response {
    ([(CONTENT_TYPE, content_type)], body).into_response()
}

/// Runs a blocking call to an external service off the async workers.
pub(crate) async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> hrm_core::Result<T> + Send + 'static,
) -> hrm_core::Result<T> {
    tokio::task::spawn_blocking(f).await.unwrap_or_else(|e| {
        Err(hrm_core::Error::Transport(format!(
            "external call aborted: {e}"
        )))
    })
}
