use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use hrm_core::Error;
use serde::{Deserialize, Serialize};

/// Status for each domain error. Exhaustive on purpose: a new variant does
/// not compile until it has a status.
pub fn status_of(err: &Error) -> StatusCode {
    match err {
        Error::NotFound { .. } => StatusCode::NOT_FOUND,
        Error::OwnerNotFound(_) => StatusCode::NOT_FOUND,
        Error::VersionConflict { .. } => StatusCode::CONFLICT,
        Error::AlreadyDecided(_) => StatusCode::CONFLICT,
        Error::AlreadyRegistered(_) => StatusCode::CONFLICT,
        Error::DuplicateScientistId(_) => StatusCode::CONFLICT,
        Error::GuardViolation(_) => StatusCode::UNPROCESSABLE_ENTITY,
        Error::Validation(_) => StatusCode::UNPROCESSABLE_ENTITY,
        Error::IllegalTransition { .. } => StatusCode::UNPROCESSABLE_ENTITY,
        Error::UnknownGrade(_) => StatusCode::UNPROCESSABLE_ENTITY,
        Error::TrackMismatch { .. } => StatusCode::UNPROCESSABLE_ENTITY,
        Error::InvalidTrack(_) => StatusCode::UNPROCESSABLE_ENTITY,
        Error::NonExpiring(_) => StatusCode::UNPROCESSABLE_ENTITY,
        Error::CategoryNotRegistrable(_) => StatusCode::UNPROCESSABLE_ENTITY,
        Error::MissingDoctorate(_) => StatusCode::UNPROCESSABLE_ENTITY,
        Error::NoAuthorMapping(_) => StatusCode::UNPROCESSABLE_ENTITY,
        Error::EmptyPath => StatusCode::UNPROCESSABLE_ENTITY,
        Error::Transport(_) => StatusCode::BAD_GATEWAY,
        Error::Protocol(_) => StatusCode::BAD_GATEWAY,
    }
}

/// JSON body of every error response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("missing or unknown bearer token")]
    Unauthorized,
    #[error("the X-Expected-Version header is required")]
    VersionRequired,
    #[error("malformed request: {0}")]
    BadRequest(String),
    #[error("storage failure: {0}")]
    Storage(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::Domain(e) => status_of(e),
            ApiError::Unauthorized => StatusCode::UNAUTHORIZED,
            ApiError::VersionRequired => StatusCode::PRECONDITION_REQUIRED,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::Storage(_) | ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            ApiError::Domain(e) => e.code(),
            ApiError::Unauthorized => "unauthorized",
            ApiError::VersionRequired => "version_required",
            ApiError::BadRequest(_) => "bad_request",
            ApiError::Storage(_) => "storage_error",
            ApiError::Internal(_) => "internal_error",
        }
    }

    pub fn body(&self) -> ErrorBody {
        let guard = match self {
            ApiError::Domain(Error::GuardViolation(g)) => Some(g.as_str().to_string()),
            _ => None,
        };
        ErrorBody {
            error: self.code().to_string(),
            message: self.to_string(),
            guard,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        if self.status().is_server_error() {
            tracing::warn!(error = %self, "request failed");
        }
        (self.status(), Json(self.body())).into_response()
    }
}
