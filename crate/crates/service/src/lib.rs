//! HTTP front end for evaluation sessions.
//!
//! - `POST /sessions` evaluates a program and keeps the result.
//! - `POST /sessions/{id}/query` runs a selection query against it.
//! - `GET /sessions/{id}/graph` returns the whole dependence graph.
//!
//! Selections travel as lists of raw addresses. Sessions beyond the
//! configured cap are evicted least recently used first.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::{Any, CorsLayer};

use cognate::eval::foreign::ForeignRegistry;
use cognate::query::{QueryError, QueryOp, Restriction};
use cognate::session::{self, dataset, Dataset, RunError, Session, View};
use cognate::{Address, Selection};

#[derive(Debug, Clone)]
pub struct Config {
    pub session_cap: usize,
    /// Evaluation steps allowed per session.
    pub step_limit: u64,
    /// Origin allowed by CORS; `None` allows any.
    pub cors_origin: Option<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            session_cap: 64,
            step_limit: 50_000_000,
            cors_origin: Some("http://localhost:5173".into()),
        }
    }
}

struct Stored {
    session: Arc<Session>,
    used: u64,
}

#[derive(Default)]
struct Store {
    sessions: HashMap<String, Stored>,
    clock: u64,
}

impl Store {
    fn get(&mut self, id: &str) -> Option<Arc<Session>> {
        self.clock += 1;
        let clock = self.clock;
        self.sessions.get_mut(id).map(|s| {
            s.used = clock;
            s.session.clone()
        })
    }

    fn insert(&mut self, id: String, session: Arc<Session>, cap: usize) {
        self.clock += 1;
        self.sessions.insert(
            id,
            Stored {
                session,
                used: self.clock,
            },
        );
        while self.sessions.len() > cap.max(1) {
            let oldest = self
                .sessions
                .iter()
                .min_by_key(|(_, s)| s.used)
                .map(|(k, _)| k.clone())
                .expect("non-empty store");
            self.sessions.remove(&oldest);
        }
    }
}

pub struct AppState {
    config: Config,
    registry: ForeignRegistry,
    store: Mutex<Store>,
    next_id: AtomicU64,
}

impl AppState {
    pub fn new(config: Config) -> Arc<Self> {
        Arc::new(AppState {
            config,
            registry: ForeignRegistry::primitives(),
            store: Mutex::new(Store::default()),
            next_id: AtomicU64::new(1),
        })
    }

    fn session(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        self.store
            .lock()
            .expect("session store poisoned")
            .get(id)
            .ok_or_else(|| ApiError::not_found(id))
    }

    pub fn session_count(&self) -> usize {
        self.store
            .lock()
            .expect("session store poisoned")
            .sessions
            .len()
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<u32>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, error: impl ToString) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                error: error.to_string(),
                line: None,
                column: None,
            },
        }
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, format!("no session {id}"))
    }
}

impl From<RunError> for ApiError {
    fn from(e: RunError) -> Self {
        let span = match &e {
            RunError::Surface(s) => s.span,
            RunError::Eval(ev) => ev.span,
            _ => None,
        };
        let mut err = ApiError::new(StatusCode::BAD_REQUEST, &e);
        err.body.line = span.map(|s| s.line);
        err.body.column = span.map(|s| s.column);
        err
    }
}

impl From<QueryError> for ApiError {
    fn from(e: QueryError) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

/// A dataset in a request: CSV text or a JSON document.
#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetBody {
    Csv(String),
    Json(serde_json::Value),
}

#[derive(Debug, Deserialize)]
pub struct CreateSession {
    pub source: String,
    #[serde(default)]
    pub datasets: BTreeMap<String, DatasetBody>,
}

#[derive(Debug, Serialize)]
pub struct PathInfo {
    pub path: String,
    pub address: u32,
    pub cell: bool,
    pub label: String,
}

#[derive(Debug, Serialize)]
pub struct Created {
    pub id: String,
    pub view: View,
    pub inputs: Vec<PathInfo>,
    pub outputs: Vec<PathInfo>,
}

/// Which presentation universes to filter results by.
#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Restrict {
    #[default]
    Both,
    Inputs,
    Outputs,
    None,
}

#[derive(Debug, Deserialize)]
pub struct QueryBody {
    pub op: QueryOp,
    pub selection: Vec<u32>,
    #[serde(default)]
    pub restrict: Restrict,
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct QueryResult {
    pub selection: Vec<u32>,
}

#[derive(Debug, Serialize)]
pub struct Vertex {
    pub address: u32,
    pub label: String,
}

#[derive(Debug, Serialize)]
pub struct GraphBody {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(u32, u32)>,
}

fn paths(map: &session::PathMap) -> Vec<PathInfo> {
    map.entries()
        .iter()
        .map(|e| PathInfo {
            path: e.path.clone(),
            address: e.address.0,
            cell: e.cell,
            label: e.label.clone(),
        })
        .collect()
}

fn load_dataset(name: &str, body: DatasetBody) -> Result<Dataset, ApiError> {
    let value = match body {
        DatasetBody::Csv(text) => dataset::parse_csv(&text),
        DatasetBody::Json(v) => dataset::parse_json(&v.to_string()),
    }
    .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("dataset {name}: {e}")))?;
    Ok(Dataset::new(name, value))
}

async fn create(
    State(app): State<Arc<AppState>>,
    Json(req): Json<CreateSession>,
) -> Result<Json<Created>, ApiError> {
    let datasets = req
        .datasets
        .into_iter()
        .map(|(name, body)| load_dataset(&name, body))
        .collect::<Result<Vec<_>, _>>()?;
    let worker = app.clone();
    let session = tokio::task::spawn_blocking(move || {
        session::run_source_with(
            &req.source,
            &datasets,
            &worker.registry,
            Some(worker.config.step_limit),
        )
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))??;
    let id = app.next_id.fetch_add(1, Ordering::Relaxed).to_string();
    let body = Created {
        id: id.clone(),
        view: session.view(),
        inputs: paths(&session.inputs),
        outputs: paths(&session.outputs),
    };
    app.store.lock().expect("session store poisoned").insert(
        id,
        Arc::new(session),
        app.config.session_cap,
    );
    Ok(Json(body))
}

/// Runs one query. Addresses outside the graph are a universe error.
pub fn answer(session: &Session, req: &QueryBody) -> Result<QueryResult, QueryError> {
    let domain = req.op.domain();
    let mut sel = Selection::empty(domain);
    for &a in &req.selection {
        let a = Address(a);
        if !session.graph.contains_vertex(a) {
            return Err(QueryError::Universe {
                address: a,
                expected: domain,
            });
        }
        sel.insert(a);
    }
    let restriction = match req.restrict {
        Restrict::Both => session.restriction(),
        Restrict::Inputs => Restriction {
            inputs: Some(session.input_cells()),
            outputs: None,
        },
        Restrict::Outputs => Restriction {
            inputs: None,
            outputs: Some(session.output_cells()),
        },
        Restrict::None => Restriction::none(),
    };
    let out = req.op.run_restricted(&session.graph, &sel, &restriction)?;
    Ok(QueryResult {
        selection: out.iter().map(|a| a.0).collect(),
    })
}

async fn query(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<QueryBody>,
) -> Result<Json<QueryResult>, ApiError> {
    let session = app.session(&id)?;
    Ok(Json(answer(&session, &req)?))
}

async fn graph(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<GraphBody>, ApiError> {
    let s = app.session(&id)?;
    let vertices = s
        .graph
        .vertices()
        .map(|a| Vertex {
            address: a.0,
            label: s.labels[a.index()].to_string(),
        })
        .collect();
    let mut edges: Vec<(u32, u32)> = s.graph.edges().map(|(a, b)| (a.0, b.0)).collect();
    edges.sort_unstable();
    Ok(Json(GraphBody { vertices, edges }))
}

pub fn router(app: Arc<AppState>) -> Router {
    let cors = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    let cors = match app
        .config
        .cors_origin
        .as_deref()
        .and_then(|o| HeaderValue::from_str(o).ok())
    {
        Some(origin) => cors.allow_origin(origin),
        None => cors.allow_origin(Any),
    };
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}/query", post(query))
        .route("/sessions/{id}/graph", get(graph))
        .layer(cors)
        .with_state(app)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, config: Config) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(config))).await
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/service.md")]
mod book {}
