//! HTTP stand-ins for the ministry registry and the bibliography archive,
//! for integration tests and local demos.
//!
//! Ministry: `POST /applications`, `GET /applications/{id}/decision`.
//! Bibliography: `GET /authors/{id}/records`.
//! Both have `/admin/...` routes to script behaviour. In `drop_connection`
//! mode the ministry closes every non-admin connection without answering;
//! in `malformed` mode it answers with broken JSON.

use std::convert::Infallible;
use std::io;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use hrm_core::bibliography::{
    AuthorRecords, BibliographySource, FixtureBibliography, PublicationRecord,
};
use hrm_core::ministry::{FailureMode, MinistrySubmission, StubMinistry};
use hrm_core::registry::MinistryDecision;
use hrm_core::{ApplicationId, Error};
use hyper::body::Incoming;
use hyper_util::rt::TokioIo;
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;
use tokio::task::JoinHandle;
use tower::ServiceExt;

/// A running stub. Stops when dropped.
pub struct StubServer {
    addr: SocketAddr,
    task: JoinHandle<()>,
}

impl StubServer {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.task.abort();
    }
}

#[derive(Debug, thiserror::Error)]
#[error("connection dropped on purpose")]
struct Dropped;

type DropRule = Arc<dyn Fn() -> bool + Send + Sync>;

fn spawn(listener: TcpListener, router: Router, dropping: DropRule) -> io::Result<StubServer> {
    let addr = listener.local_addr()?;
    let task = tokio::spawn(async move {
        loop {
            let Ok((stream, _)) = listener.accept().await else {
                continue;
            };
            let router = router.clone();
            let dropping = Arc::clone(&dropping);
            tokio::spawn(async move {
                let service = hyper::service::service_fn(move |req: hyper::Request<Incoming>| {
                    let drop_it = dropping() && !req.uri().path().starts_with("/admin");
                    let router = router.clone();
                    async move {
                        if drop_it {
                            return Err(Dropped);
                        }
                        let response = router.oneshot(req.map(axum::body::Body::new)).await;
                        Ok::<_, Dropped>(
                            response.unwrap_or_else(|never: Infallible| match never {}),
                        )
                    }
                });
                let _ = hyper::server::conn::http1::Builder::new()
                    .serve_connection(TokioIo::new(stream), service)
                    .await;
            });
        }
    });
    Ok(StubServer { addr, task })
}

fn malformed() -> Response {
    (
        StatusCode::OK,
        [(header::CONTENT_TYPE, "application/json")],
        "{\"ack\": \"ACK-",
    )
        .into_response()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModeBody {
    pub mode: FailureMode,
}

pub fn ministry_router(stub: Arc<StubMinistry>) -> Router {
    async fn submit(
        State(stub): State<Arc<StubMinistry>>,
        Json(body): Json<MinistrySubmission>,
    ) -> Response {
        match stub.mode() {
            FailureMode::Malformed => malformed(),
            _ => Json(stub.receive(&body)).into_response(),
        }
    }
    async fn decision(State(stub): State<Arc<StubMinistry>>, Path(id): Path<u64>) -> Response {
        match stub.mode() {
            FailureMode::Malformed => malformed(),
            _ => Json(stub.decision(ApplicationId(id))).into_response(),
        }
    }
    async fn set_mode(
        State(stub): State<Arc<StubMinistry>>,
        Json(body): Json<ModeBody>,
    ) -> StatusCode {
        stub.set_mode(body.mode);
        StatusCode::NO_CONTENT
    }
    async fn decide(
        State(stub): State<Arc<StubMinistry>>,
        Path(id): Path<u64>,
        Json(body): Json<MinistryDecision>,
    ) -> StatusCode {
        stub.decide(ApplicationId(id), body);
        StatusCode::NO_CONTENT
    }
    async fn received(State(stub): State<Arc<StubMinistry>>) -> Json<Vec<MinistrySubmission>> {
        Json(stub.received())
    }

    Router::new()
        .route("/applications", post(submit))
        .route("/applications/{id}/decision", get(decision))
        .route("/admin/mode", put(set_mode))
        .route("/admin/applications/{id}/decision", put(decide))
        .route("/admin/received", get(received))
        .with_state(stub)
}

pub async fn start_ministry(addr: SocketAddr, stub: Arc<StubMinistry>) -> io::Result<StubServer> {
    let listener = TcpListener::bind(addr).await?;
    let watched = Arc::clone(&stub);
    spawn(
        listener,
        ministry_router(stub),
        Arc::new(move || watched.mode() == FailureMode::DropConnection),
    )
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AvailabilityBody {
    pub available: bool,
}

pub fn bibliography_router(source: Arc<FixtureBibliography>) -> Router {
    async fn records(
        State(source): State<Arc<FixtureBibliography>>,
        Path(author_id): Path<String>,
    ) -> Response {
        match source.fetch(&author_id) {
            Ok(records) => Json(AuthorRecords { author_id, records }).into_response(),
            Err(Error::Transport(msg)) => (StatusCode::SERVICE_UNAVAILABLE, msg).into_response(),
            Err(e) => (StatusCode::NOT_FOUND, e.to_string()).into_response(),
        }
    }
    async fn set_records(
        State(source): State<Arc<FixtureBibliography>>,
        Path(author_id): Path<String>,
        Json(body): Json<Vec<PublicationRecord>>,
    ) -> StatusCode {
        source.set_records(&author_id, body);
        StatusCode::NO_CONTENT
    }
    async fn availability(
        State(source): State<Arc<FixtureBibliography>>,
        Json(body): Json<AvailabilityBody>,
    ) -> StatusCode {
        source.set_unavailable(!body.available);
        StatusCode::NO_CONTENT
    }

    Router::new()
        .route("/authors/{id}/records", get(records))
        .route("/admin/authors/{id}", put(set_records))
        .route("/admin/availability", put(availability))
        .with_state(source)
}

pub async fn start_bibliography(
    addr: SocketAddr,
    source: Arc<FixtureBibliography>,
) -> io::Result<StubServer> {
    let listener = TcpListener::bind(addr).await?;
    spawn(listener, bibliography_router(source), Arc::new(|| false))
}
