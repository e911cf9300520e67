//! Local HTTP service over versioned sourcing scenarios.
//!
//! Scenarios are loaded once, then inspected, edited, evaluated, reported
//! and solved through JSON endpoints. Every successful write produces a new
//! immutable snapshot with the version bumped by one; writers name the
//! version they started from and lose with 409 if someone got there first.

mod error;
pub mod store;

use std::future::Future;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use sourcing_core::eval::evaluate;
use sourcing_core::ingest::ingest;
use sourcing_core::mutate::{apply_script, set_shipment, Mutation};
use sourcing_core::report::matrix_report;
use sourcing_core::solver::{solve_min_cost_with, CancelToken, SolveStatus};
use sourcing_core::{Evaluation, Plan, Scenario, ScenarioDoc};

pub use error::ApiError;
pub use store::{ScenarioHandle, Store, UpdateError};

pub const DEFAULT_ADDR: &str = "127.0.0.1:7411";
pub const EXPECTED_VERSION: &str = "expected-version";

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
}

impl AppState {
    pub fn new(store: Store) -> Self {
        AppState { store: Arc::new(store) }
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/scenarios", post(create))
        .route("/scenarios/:id", get(fetch))
        .route("/scenarios/:id/mutations", post(mutate))
        .route("/scenarios/:id/plan/:supplier/:destination", put(set_cell))
        .route("/scenarios/:id/evaluation", get(evaluation))
        .route("/scenarios/:id/report/matrix", get(report))
        .route("/scenarios/:id/solve", post(solve))
        .with_state(state)
}

/// Runs the service until ctrl-c. With a snapshot path, scenarios are loaded
/// from it on start (if it exists) and written back on shutdown.
pub async fn serve(addr: SocketAddr, snapshot: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    serve_until(listener, snapshot, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}

/// [`serve`] on an already bound listener, stopping when `shutdown` resolves.
pub async fn serve_until(
    listener: tokio::net::TcpListener,
    snapshot: Option<PathBuf>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    let store = match &snapshot {
        Some(path) if path.exists() => {
            let store = Store::load(path)?;
            tracing::info!(count = store.len(), path = %path.display(), "loaded snapshot");
            store
        }
        _ => Store::new(),
    };
    let state = AppState::new(store);
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(shutdown)
        .await?;
    if let Some(path) = snapshot {
        state.store.save(&path)?;
        tracing::info!(count = state.store.len(), path = %path.display(), "saved snapshot");
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct Created {
    id: String,
    version: u64,
}

#[derive(Debug, Serialize)]
struct Versioned {
    version: u64,
}

#[derive(Debug, Serialize)]
struct CellEdited {
    version: u64,
    evaluation: Evaluation,
}

#[derive(Debug, Serialize)]
struct Solved {
    plan: Plan,
    objective: sourcing_core::Money,
    status: SolveStatus,
    version: u64,
    applied: bool,
}

#[derive(Debug, Deserialize)]
struct CreateParams {
    plan_default: Option<u32>,
}

#[derive(Debug, Deserialize)]
struct SolveParams {
    #[serde(default)]
    apply: bool,
}

fn utf8(body: &Bytes) -> Result<&str, ApiError> {
    std::str::from_utf8(body).map_err(|e| ApiError::bad_request(format!("body is not UTF-8: {e}")))
}

/// A body whose first non-blank character is `{` is the canonical JSON
/// serialization; anything else is treated as a raw CSV document.
fn parse_scenario(text: &str, plan_default: u32) -> Result<Scenario, ApiError> {
    let trimmed = text.trim_start_matches('\u{feff}').trim_start();
    if trimmed.starts_with('{') {
        let doc: ScenarioDoc = serde_json::from_str(trimmed)
            .map_err(|e| ApiError::bad_request(format!("malformed scenario JSON: {e}")))?;
        Ok(Scenario::try_from(doc)?)
    } else {
        Ok(ingest(text, plan_default)?)
    }
}

fn expected_version(headers: &HeaderMap) -> Result<Option<u64>, ApiError> {
    let Some(value) = headers.get(EXPECTED_VERSION) else {
        return Ok(None);
    };
    value
        .to_str()
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .map(Some)
        .ok_or_else(|| ApiError::bad_request(format!("{EXPECTED_VERSION} header must be a non-negative integer")))
}

fn lookup(state: &AppState, id: &str) -> Result<Arc<ScenarioHandle>, ApiError> {
    state.store.get(id).ok_or_else(|| ApiError::not_found(id))
}

async fn create(
    State(state): State<AppState>,
    Query(params): Query<CreateParams>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let plan_default = params.plan_default.unwrap_or(sourcing_core::ingest::DEFAULT_PLAN_QUANTITY);
    let scenario = parse_scenario(utf8(&body)?, plan_default)?;
    let handle = state.store.insert(scenario);
    tracing::debug!(id = %handle.id, "created scenario");
    Ok((
        StatusCode::CREATED,
        Json(Created {
            id: handle.id.clone(),
            version: handle.version,
        }),
    )
        .into_response())
}

async fn fetch(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<ScenarioHandle>, ApiError> {
    Ok(Json(lookup(&state, &id)?.as_ref().clone()))
}

async fn mutate(
    State(state): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Json<Versioned>, ApiError> {
    let expected = expected_version(&headers)?
        .ok_or_else(|| ApiError::bad_request(format!("missing {EXPECTED_VERSION} header")))?;
    let script: Vec<Mutation> = serde_json::from_slice(&body)
        .map_err(|e| ApiError::bad_request(format!("malformed mutation script: {e}")))?;
    let handle = state
        .store
        .update(&id, Some(expected), |s| apply_script(s, &script))?;
    Ok(Json(Versioned { version: handle.version }))
}

async fn set_cell(
    State(state): State<AppState>,
    Path((id, supplier, destination)): Path<(String, String, String)>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Json<CellEdited>, ApiError> {
    let expected = expected_version(&headers)?;
    let quantity: i64 = serde_json::from_str(utf8(&body)?.trim())
        .map_err(|_| ApiError::bad_request("body must be an integer quantity"))?;
    let handle = state
        .store
        .update(&id, expected, |s| set_shipment(s, &supplier, &destination, quantity))?;
    Ok(Json(CellEdited {
        version: handle.version,
        evaluation: evaluate(&handle.scenario),
    }))
}

async fn evaluation(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Evaluation>, ApiError> {
    Ok(Json(evaluate(&lookup(&state, &id)?.scenario)))
}

async fn report(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<sourcing_core::MatrixReport>, ApiError> {
    Ok(Json(matrix_report(&lookup(&state, &id)?.scenario)))
}

/// Cancels the solve if the request future is dropped (client went away).
struct CancelOnDrop(CancelToken);

impl Drop for CancelOnDrop {
    fn drop(&mut self) {
        self.0.cancel();
    }
}

async fn solve(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(params): Query<SolveParams>,
    headers: HeaderMap,
) -> Result<Json<Solved>, ApiError> {
    let expected = expected_version(&headers)?;
    let handle = lookup(&state, &id)?;
    if let Some(expected) = expected {
        if expected != handle.version {
            return Err(UpdateError::<std::convert::Infallible>::StaleVersion {
                expected,
                current: handle.version,
            }
            .into());
        }
    }
    let token = CancelToken::new();
    let _guard = CancelOnDrop(token.clone());
    let snapshot = handle.clone();
    let result = tokio::task::spawn_blocking(move || solve_min_cost_with(&snapshot.scenario, &token))
        .await
        .map_err(|e| ApiError::internal(format!("solver task failed: {e}")))?
        .map_err(|_| ApiError::cancelled())?;

    let mut version = handle.version;
    let applied = params.apply && result.is_optimal();
    if applied {
        // The solve ran against `handle.version`; refuse to install it over
        // anything newer.
        let next = state.store.update(&id, Some(handle.version), |s| {
            Ok::<_, std::convert::Infallible>(result.apply_to(s))
        })?;
        version = next.version;
    }
    Ok(Json(Solved {
        plan: result.plan,
        objective: result.objective,
        status: result.status,
        version,
        applied,
    }))
}
