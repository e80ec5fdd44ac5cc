use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use scitree_core::search::SearchError;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApiError {
    QueryTooShort,
    BadPagination(String),
    BadRequest(String),
    InvalidExpansion(String),
    UnknownResearcher(String),
    NotFound,
}

#[derive(Serialize)]
struct Envelope<'a> {
    error: Body<'a>,
}

#[derive(Serialize)]
struct Body<'a> {
    code: &'a str,
    message: String,
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::UnknownResearcher(_) | ApiError::NotFound => StatusCode::NOT_FOUND,
            _ => StatusCode::BAD_REQUEST,
        }
    }

    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            ApiError::QueryTooShort => "QUERY_TOO_SHORT",
            ApiError::BadPagination(_) => "BAD_PAGINATION",
            ApiError::BadRequest(_) => "BAD_REQUEST",
            ApiError::InvalidExpansion(_) => "INVALID_EXPANSION",
            ApiError::UnknownResearcher(_) => "UNKNOWN_RESEARCHER",
            ApiError::NotFound => "NOT_FOUND",
        }
    }

    pub fn message(&self) -> String {
        match self {
            ApiError::QueryTooShort => SearchError::QueryTooShort.to_string(),
            ApiError::BadPagination(msg) | ApiError::BadRequest(msg) => msg.clone(),
            ApiError::InvalidExpansion(id) => {
                format!("node {id:?} is not part of the current view and cannot be expanded")
            }
            ApiError::UnknownResearcher(id) => format!("no researcher with id {id:?}"),
            ApiError::NotFound => "no such endpoint".to_owned(),
        }
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code(), self.message())
    }
}

impl std::error::Error for ApiError {}

impl From<SearchError> for ApiError {
    fn from(err: SearchError) -> Self {
        match err {
            SearchError::QueryTooShort => ApiError::QueryTooShort,
            SearchError::BadPagination(msg) => ApiError::BadPagination(msg),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Envelope {
            error: Body {
                code: self.code(),
                message: self.message(),
            },
        };
        (self.status(), Json(body)).into_response()
    }
}
