//! Read-only JSON API over a loaded genealogy repository.
//!
//! | route                                   | body                         |
//! |-----------------------------------------|------------------------------|
//! | `GET /researchers?name=&institution=&area=&page=&page_size=` | [`SearchResult`] |
//! | `GET /researchers/{id}`                 | [`ResearcherDetail`]         |
//! | `GET /researchers/{id}/tree?expanded=&depth=` | [`TreeView`]           |
//! | `GET /researchers/{id}/metrics`         | [`MetricsReport`]            |
//! | `GET /researchers/{id}/timeline`        | yearly counts                |
//! | `GET /researchers/{id}/ancestors`       | generations of supervisors   |
//! | `GET /researchers/{id}/deepest-path`    | id list                      |
//!
//! Errors use one envelope: `{"error": {"code": "...", "message": "..."}}`.
//!
//! [`SearchResult`]: scitree_core::search::SearchResult
//! [`TreeView`]: scitree_core::TreeView
//! [`MetricsReport`]: scitree_core::MetricsReport

mod detail;
mod error;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::Method;
use axum::routing::get;
use axum::{Json, Router};
use scitree_core::graph::GraphError;
use scitree_core::metrics::{self, MetricsReport, YearlyCounts};
use scitree_core::search::{SearchIndex, SearchQuery, SearchResult, DEFAULT_PAGE_SIZE};
use scitree_core::{Repository, TreeView};
use serde::Serialize;
use tokio::net::TcpListener;
use tower_http::cors::{Any, CorsLayer};

pub use detail::ResearcherDetail;
pub use error::ApiError;

/// Default number of levels shown below the root in tree views.
pub const DEFAULT_TREE_DEPTH: usize = 1;
const MAX_TREE_DEPTH: usize = 16;

/// Immutable snapshot shared by all request handlers.
#[derive(Clone)]
pub struct AppState {
    repo: Arc<Repository>,
    search: Arc<SearchIndex>,
}

impl AppState {
    pub fn new(repo: Repository) -> Self {
        let search = SearchIndex::new(&repo);
        AppState {
            repo: Arc::new(repo),
            search: Arc::new(search),
        }
    }

    pub fn repository(&self) -> &Repository {
        &self.repo
    }
}

pub fn router(state: AppState) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET, Method::OPTIONS])
        .allow_headers(Any);
    Router::new()
        .route("/researchers", get(search))
        .route("/researchers/:id", get(detail))
        .route("/researchers/:id/tree", get(tree))
        .route("/researchers/:id/metrics", get(metrics_report))
        .route("/researchers/:id/timeline", get(timeline))
        .route("/researchers/:id/ancestors", get(ancestors))
        .route("/researchers/:id/deepest-path", get(deepest_path))
        .fallback(|| async { ApiError::NotFound })
        .layer(cors)
        .with_state(state)
}

/// Serve until Ctrl-C.
pub async fn serve(listener: TcpListener, repo: Repository) -> std::io::Result<()> {
    let app = router(AppState::new(repo));
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

type Params = Query<HashMap<String, String>>;

fn positive(params: &HashMap<String, String>, key: &str, default: usize) -> Result<usize, ApiError> {
    match params.get(key).map(|s| s.trim()) {
        None | Some("") => Ok(default),
        Some(raw) => raw
            .parse()
            .map_err(|_| ApiError::BadPagination(format!("{key} must be a positive integer, got {raw:?}"))),
    }
}

/// Builds the core query from raw parameters.
pub fn search_query(params: &HashMap<String, String>) -> Result<SearchQuery, ApiError> {
    let non_empty = |key: &str| params.get(key).filter(|s| !s.trim().is_empty()).cloned();
    let query = SearchQuery {
        name: params.get("name").cloned().unwrap_or_default(),
        institution: non_empty("institution"),
        area: non_empty("area"),
        page: positive(params, "page", 1)?,
        page_size: positive(params, "page_size", DEFAULT_PAGE_SIZE)?,
    };
    query.validate()?;
    Ok(query)
}

async fn search(State(state): State<AppState>, Query(params): Params) -> Result<Json<SearchResult>, ApiError> {
    let query = search_query(&params)?;
    Ok(Json(state.search.search(&query)?))
}

async fn detail(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<ResearcherDetail>, ApiError> {
    Ok(Json(ResearcherDetail::build(&state.repo, &id)?))
}

async fn tree(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(params): Params,
) -> Result<Json<TreeView>, ApiError> {
    let graph = &state.repo.graph;
    graph.require(&id)?;
    let expanded: BTreeSet<String> = params
        .get("expanded")
        .map(|raw| {
            raw.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_owned)
                .collect()
        })
        .unwrap_or_default();
    let depth = match params.get("depth").map(|s| s.trim()) {
        None | Some("") => DEFAULT_TREE_DEPTH,
        Some(raw) => raw
            .parse::<usize>()
            .ok()
            .filter(|d| *d <= MAX_TREE_DEPTH)
            .ok_or_else(|| ApiError::BadRequest(format!("depth must be an integer between 0 and {MAX_TREE_DEPTH}")))?,
    };
    Ok(Json(graph.subtree_view(&id, depth, &expanded)?))
}

async fn metrics_report(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<MetricsReport>, ApiError> {
    Ok(Json(metrics::metrics_report(&state.repo.graph, &id)?))
}

async fn timeline(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<YearlyCounts>, ApiError> {
    Ok(Json(metrics::supervisions_by_year(&state.repo.graph, &id)?))
}

#[derive(Debug, Serialize)]
pub struct AncestorRef {
    pub id: String,
    pub name: String,
}

async fn ancestors(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<Vec<Vec<AncestorRef>>>, ApiError> {
    let graph = &state.repo.graph;
    let ix = graph.require(&id)?;
    let generations = graph
        .ancestor_generation_indices(ix)
        .into_iter()
        .map(|generation| {
            generation
                .into_iter()
                .map(|v| AncestorRef {
                    id: graph.id(v).to_owned(),
                    name: graph.meta(v).name.clone(),
                })
                .collect()
        })
        .collect();
    Ok(Json(generations))
}

async fn deepest_path(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Vec<String>>, ApiError> {
    Ok(Json(state.repo.graph.deepest_path(&id)?))
}

impl From<GraphError> for ApiError {
    fn from(err: GraphError) -> Self {
        match err {
            GraphError::UnknownResearcher(id) => ApiError::UnknownResearcher(id),
            GraphError::InvalidExpansion(id) => ApiError::InvalidExpansion(id),
            other @ GraphError::UnknownEndpoint { .. } => ApiError::BadRequest(other.to_string()),
        }
    }
}
