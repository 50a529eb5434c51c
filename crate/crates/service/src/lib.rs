//! HTTP facade over the decision engine.
//!
//! The session holds one model at a time. Every request works on an
//! immutable snapshot of it, and every response carries the revision of that
//! snapshot, in the JSON body and in the `x-model-revision` header.

use std::net::SocketAddr;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Query as UrlQuery, State};
use axum::http::{header, HeaderName, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fuzzarch_core::fuzzy::LinguisticLevel;
use fuzzarch_core::goal_model::{apply_tactic, export_dot, TacticError, TacticRequest};
use fuzzarch_core::model::{Model, ModelDocument, ModelError};
use fuzzarch_core::ranking::{RankError, RunOptions};
use fuzzarch_core::report::{run_compare, run_rank, RankRequest};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::cors::CorsLayer;

pub const REVISION_HEADER: &str = "x-model-revision";

/// A model together with the revision it was installed as.
#[derive(Debug)]
pub struct Snapshot {
    pub model: Model,
    pub revision: u64,
}

#[derive(Clone)]
pub struct AppState {
    current: Arc<RwLock<Arc<Snapshot>>>,
    options: RunOptions,
}

impl AppState {
    pub fn new(model: Model) -> Self {
        AppState {
            current: Arc::new(RwLock::new(Arc::new(Snapshot { model, revision: 1 }))),
            options: RunOptions::default(),
        }
    }

    pub fn with_options(mut self, options: RunOptions) -> Self {
        self.options = options;
        self
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Installs the model produced by `update` unless `base` is stale. The
    /// write lock is held throughout, so updates never interleave.
    fn replace<F>(&self, base: Option<u64>, update: F) -> Result<Arc<Snapshot>, ApiError>
    where
        F: FnOnce(&Model) -> Result<Model, ApiError>,
    {
        let mut guard = self.current.write().unwrap_or_else(|e| e.into_inner());
        let revision = guard.revision;
        if let Some(base) = base {
            if base != revision {
                return Err(ApiError::Conflict { base, current: revision });
            }
        }
        let model = update(&guard.model)?;
        let next = Arc::new(Snapshot { model, revision: revision + 1 });
        *guard = next.clone();
        Ok(next)
    }
}

#[derive(Debug)]
pub enum ApiError {
    BadRequest { message: String, details: Option<Value> },
    NotFound(String),
    Conflict { base: u64, current: u64 },
    Infeasible { revision: u64, payload: Value },
    Internal(String),
}

impl ApiError {
    fn bad(message: impl ToString) -> Self {
        ApiError::BadRequest { message: message.to_string(), details: None }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body, revision) = match self {
            ApiError::BadRequest { message, details } => {
                let mut body = json!({"error": "bad_request", "message": message});
                if let Some(d) = details {
                    body["details"] = d;
                }
                (StatusCode::BAD_REQUEST, body, None)
            }
            ApiError::NotFound(message) => (StatusCode::NOT_FOUND, json!({"error": "not_found", "message": message}), None),
            ApiError::Conflict { base, current } => (
                StatusCode::CONFLICT,
                json!({
                    "error": "revision_conflict",
                    "message": format!("base revision {base} is stale; current revision is {current}"),
                    "revision": current,
                }),
                Some(current),
            ),
            ApiError::Infeasible { revision, payload } => (StatusCode::UNPROCESSABLE_ENTITY, payload, Some(revision)),
            ApiError::Internal(message) => {
                (StatusCode::INTERNAL_SERVER_ERROR, json!({"error": "internal", "message": message}), None)
            }
        };
        let mut response = (status, Json(body)).into_response();
        if let Some(r) = revision {
            set_revision(&mut response, r);
        }
        response
    }
}

fn set_revision(response: &mut Response, revision: u64) {
    response
        .headers_mut()
        .insert(HeaderName::from_static(REVISION_HEADER), HeaderValue::from(revision));
}

fn json_response<T: Serialize>(revision: u64, body: &T) -> Response {
    let mut response = Json(body).into_response();
    set_revision(&mut response, revision);
    response
}

/// Parses a JSON body by hand so malformed input gets our 400 payload. An
/// empty body reads as `{}`.
fn parse_body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    let text: &[u8] = if bytes.iter().all(u8::is_ascii_whitespace) { b"{}" } else { bytes };
    serde_json::from_slice(text).map_err(|e| ApiError::bad(format!("malformed request body: {e}")))
}

fn model_error(err: ModelError) -> ApiError {
    let details = match &err {
        ModelError::Invalid(items) => serde_json::to_value(items).ok(),
        _ => None,
    };
    ApiError::BadRequest { message: err.to_string(), details }
}

fn rank_error(revision: u64, err: RankError) -> ApiError {
    match err {
        RankError::NoFeasible(inf) => ApiError::Infeasible {
            revision,
            payload: json!({
                "error": "infeasible",
                "message": "no architecture satisfies the constraints",
                "total": inf.total,
                "tightest": inf.tightest,
                "revision": revision,
            }),
        },
        RankError::Space(e) => ApiError::bad(e),
        RankError::Workers(e) => ApiError::Internal(e),
        other => ApiError::bad(other),
    }
}

fn tactic_error(err: TacticError) -> ApiError {
    match err {
        TacticError::UnknownNode { .. } => ApiError::NotFound(err.to_string()),
        other => ApiError::bad(other),
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/model", get(get_model).put(put_model))
        .route("/space/size", get(space_size))
        .route("/rank", post(rank))
        .route("/compare", post(compare))
        .route("/tactics/apply", post(tactics_apply))
        .route("/membership", get(membership))
        .route("/export/dot", get(dot))
        .fallback(not_found)
        .layer(CorsLayer::permissive())
        .with_state(state)
}

async fn not_found() -> ApiError {
    ApiError::NotFound("no such endpoint".into())
}

#[derive(Serialize)]
struct ModelBody<'a> {
    revision: u64,
    model: ModelDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    tactic: Option<&'a TacticRequest>,
}

async fn get_model(State(state): State<AppState>) -> Response {
    let snap = state.snapshot();
    json_response(snap.revision, &ModelBody { revision: snap.revision, model: snap.model.to_document(), tactic: None })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PutModel {
    #[serde(default)]
    base_revision: Option<u64>,
    model: Value,
}

async fn put_model(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: PutModel = parse_body(&body)?;
    let text = serde_json::to_string_pretty(&req.model).map_err(|e| ApiError::Internal(e.to_string()))?;
    let model = fuzzarch_core::model::parse_model(&text).map_err(model_error)?;
    let snap = state.replace(req.base_revision, |_| Ok(model))?;
    Ok(json_response(
        snap.revision,
        &ModelBody { revision: snap.revision, model: snap.model.to_document(), tactic: None },
    ))
}

async fn space_size(State(state): State<AppState>) -> Result<Response, ApiError> {
    let snap = state.snapshot();
    let size = snap.model.space().map_err(ApiError::bad)?.size();
    Ok(json_response(snap.revision, &json!({"size": size, "revision": snap.revision})))
}

async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
}

async fn rank(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: RankRequest = parse_body(&body)?;
    let snap = state.snapshot();
    let options = state.options;
    let revision = snap.revision;
    let mut doc = blocking(move || run_rank(&snap.model, &req, options).map_err(|e| rank_error(revision, e))).await?;
    doc.revision = Some(revision);
    Ok(json_response(revision, &doc))
}

async fn compare(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: RankRequest = parse_body(&body)?;
    let snap = state.snapshot();
    let options = state.options;
    let revision = snap.revision;
    let mut doc = blocking(move || run_compare(&snap.model, &req, options).map_err(|e| rank_error(revision, e))).await?;
    doc.revision = Some(revision);
    Ok(json_response(revision, &doc))
}

#[derive(Deserialize)]
struct ApplyTactic {
    #[serde(default)]
    base_revision: Option<u64>,
    #[serde(flatten)]
    request: TacticRequest,
}

async fn tactics_apply(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: ApplyTactic = parse_body(&body)?;
    let snap = state.replace(req.base_revision, |model| {
        let graph = apply_tactic(&model.graph, &req.request).map_err(tactic_error)?;
        Ok(Model { graph, ..model.clone() })
    })?;
    Ok(json_response(
        snap.revision,
        &ModelBody { revision: snap.revision, model: snap.model.to_document(), tactic: Some(&req.request) },
    ))
}

#[derive(Deserialize)]
struct MembershipParams {
    level: Option<String>,
    x: Option<String>,
}

async fn membership(
    State(state): State<AppState>,
    UrlQuery(params): UrlQuery<MembershipParams>,
) -> Result<Response, ApiError> {
    let level: LinguisticLevel = params
        .level
        .ok_or_else(|| ApiError::bad("missing query parameter `level`"))?
        .parse()
        .map_err(ApiError::bad)?;
    let x: f64 = params
        .x
        .ok_or_else(|| ApiError::bad("missing query parameter `x`"))?
        .parse()
        .map_err(|_| ApiError::bad("query parameter `x` must be a number"))?;
    if !x.is_finite() {
        return Err(ApiError::bad("query parameter `x` must be finite"));
    }
    let snap = state.snapshot();
    let value = snap.model.scale().fuzzy(level).membership(x);
    Ok(json_response(
        snap.revision,
        &json!({"level": level, "x": x, "membership": value, "revision": snap.revision}),
    ))
}

async fn dot(State(state): State<AppState>) -> Result<Response, ApiError> {
    let snap = state.snapshot();
    let text = export_dot(&snap.model.graph).map_err(ApiError::bad)?;
    let mut response = ([(header::CONTENT_TYPE, "text/vnd.graphviz; charset=utf-8")], text).into_response();
    set_revision(&mut response, snap.revision);
    Ok(response)
}

/// Serves `model` on `addr` until the process is stopped.
pub async fn serve(addr: SocketAddr, model: Model) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new(model))).await
}

/// [`serve`] on a fresh multi-threaded runtime.
pub fn serve_blocking(addr: SocketAddr, model: Model) -> std::io::Result<()> {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?
        .block_on(serve(addr, model))
}
