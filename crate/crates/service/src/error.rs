use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("{0} not found")]
    NotFound(String),
    #[error("an expansion is already running on tree {0}")]
    Busy(u64),
    #[error(transparent)]
    Engine(#[from] vnarrow::Error),
    #[error("invalid request: {0}")]
    BadRequest(String),
    #[error("snapshot failed: {0}")]
    Snapshot(String),
    #[error("worker failed: {0}")]
    Internal(String),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Busy(_) => StatusCode::CONFLICT,
            ApiError::Engine(_) | ApiError::BadRequest(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Snapshot(_) | ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            ApiError::NotFound(_) => "not-found",
            ApiError::Busy(_) => "busy",
            ApiError::Engine(vnarrow::Error::Syntax { .. }) => "parse",
            ApiError::Engine(_) => "engine",
            ApiError::BadRequest(_) => "bad-request",
            ApiError::Snapshot(_) => "snapshot",
            ApiError::Internal(_) => "internal",
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": self.kind(), "message": self.to_string() });
        if let ApiError::Engine(vnarrow::Error::Syntax { line, column, .. }) = &self {
            body["line"] = json!(line);
            body["column"] = json!(column);
        }
        (self.status(), Json(body)).into_response()
    }
}

pub type ApiResult<T> = Result<T, ApiError>;
