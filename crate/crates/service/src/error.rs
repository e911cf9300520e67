use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::{json, Value};

use sourcing_core::ingest::{IngestError, NormalizeError};
use sourcing_core::model::InvalidScenario;
use sourcing_core::mutate::{MutationError, ScriptError};

use crate::store::UpdateError;

/// An error response: the status plus a JSON body `{code, message, detail}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub detail: Value,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>, detail: Value) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
            detail,
        }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message, Value::Null)
    }

    pub fn not_found(id: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "not_found",
            format!("unknown scenario {id:?}"),
            json!({ "id": id }),
        )
    }

    pub fn cancelled() -> Self {
        Self::new(StatusCode::SERVICE_UNAVAILABLE, "cancelled", "solve was cancelled", Value::Null)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message, Value::Null)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "code": self.code, "message": self.message, "detail": self.detail });
        (self.status, Json(body)).into_response()
    }
}

impl From<InvalidScenario> for ApiError {
    fn from(e: InvalidScenario) -> Self {
        Self::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "invalid_scenario",
            e.to_string(),
            json!(e.0),
        )
    }
}

impl From<IngestError> for ApiError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Parse(p) => Self::new(
                StatusCode::BAD_REQUEST,
                "malformed_document",
                p.to_string(),
                json!({ "line": p.line }),
            ),
            IngestError::Normalize(NormalizeError::Row { line, error }) => Self::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "invalid_row",
                format!("line {line}: {error}"),
                json!({ "line": line }),
            ),
            IngestError::Normalize(NormalizeError::Invalid(invalid)) => invalid.into(),
        }
    }
}

fn mutation_detail(e: &MutationError) -> Value {
    match e {
        MutationError::Invalid(invalid) => json!({ "error": e.to_string(), "violations": invalid.0 }),
        other => json!({ "error": other.to_string() }),
    }
}

impl From<MutationError> for ApiError {
    fn from(e: MutationError) -> Self {
        Self::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "mutation_rejected",
            e.to_string(),
            mutation_detail(&e),
        )
    }
}

impl From<ScriptError> for ApiError {
    fn from(e: ScriptError) -> Self {
        let mut detail = mutation_detail(&e.source);
        detail["index"] = json!(e.index);
        Self::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "mutation_rejected",
            format!("step {}: {}", e.index, e.source),
            detail,
        )
    }
}

impl From<std::convert::Infallible> for ApiError {
    fn from(e: std::convert::Infallible) -> Self {
        match e {}
    }
}

impl<E: Into<ApiError>> From<UpdateError<E>> for ApiError {
    fn from(e: UpdateError<E>) -> Self {
        match e {
            UpdateError::NotFound(id) => ApiError::not_found(&id),
            UpdateError::StaleVersion { expected, current } => Self::new(
                StatusCode::CONFLICT,
                "stale_version",
                format!("expected version {expected}, current version is {current}"),
                json!({ "expected": expected, "current": current }),
            ),
            UpdateError::Rejected(inner) => inner.into(),
        }
    }
}
