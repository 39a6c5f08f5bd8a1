//! Local HTTP JSON API over a session.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::matroid::ElementSet;
use crate::polytope::{parse_rational, Functional, Rational};
use crate::session::{sweep_table, PosetAnalysis, Session, SessionError, TableRow};
use crate::multicomplex::find_pure_labeling;
use crate::poset::{check_structure, PosetJson};
use crate::sweep::{SearchParams, SweepError, SweepJson};

/// Shared service state. Store mutations are serialized through `job`;
/// reads only take the short `session` lock.
pub struct AppState {
    session: Mutex<Versioned>,
    job: tokio::sync::Mutex<()>,
    path: Option<PathBuf>,
}

struct Versioned {
    session: Session,
    revision: u64,
}

impl AppState {
    /// `path`, when given, receives the session after every change.
    pub fn new(session: Session, path: Option<PathBuf>) -> Arc<Self> {
        Arc::new(AppState {
            session: Mutex::new(Versioned { session, revision: 0 }),
            job: tokio::sync::Mutex::new(()),
            path,
        })
    }

    pub fn snapshot(&self) -> (Session, u64) {
        let v = self.session.lock().expect("session lock");
        (v.session.clone(), v.revision)
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/matroid", get(matroid))
        .route("/store", get(store))
        .route("/search", post(search))
        .route("/update", post(update))
        .route("/poset/{id}", get(poset))
        .route("/sweep/{id}", get(sweep))
        .with_state(state)
}

pub async fn serve(state: Arc<AppState>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match e {
            SessionError::Sweep(
                SweepError::NotABasis(_)
                | SweepError::InvalidParams(_)
                | SweepError::InitialNotPinned { .. }
                | SweepError::NonGenericFunctional { .. }
                | SweepError::ExhaustedMisses { .. }
                | SweepError::Polytope(_),
            )
            | SessionError::Matroid(_)
            | SessionError::Polytope(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(status, e.to_string())
    }
}

fn bad_request(msg: impl Into<String>) -> ApiError {
    ApiError(StatusCode::BAD_REQUEST, msg.into())
}

async fn matroid(State(state): State<Arc<AppState>>) -> Json<Value> {
    let (s, _) = state.snapshot();
    let m = &s.matroid;
    Json(json!({
        "n": m.ground_size(),
        "rank": m.rank(),
        "basis_count": m.basis_count(),
        "bases": m.bases().iter().map(|b| b.to_vec()).collect::<Vec<_>>(),
        "h_vector": m.h_vector().0,
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepSummary {
    pub id: usize,
    pub base: Vec<usize>,
    pub order: Vec<Vec<usize>>,
    pub ip_sets: Vec<Vec<usize>>,
    pub region_hash: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PosetSummary {
    pub id: usize,
    pub class: usize,
    pub sweeps: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StoreView {
    pub revision: u64,
    pub sweeps: Vec<SweepSummary>,
    pub posets: Vec<PosetSummary>,
}

fn store_view(s: &Session, revision: u64) -> Result<StoreView, ApiError> {
    let m = &s.matroid;
    let sweeps = s
        .store
        .sweeps()
        .iter()
        .enumerate()
        .map(|(id, st)| SweepSummary {
            id,
            base: m.basis(st.sweep.base_vertex()).to_vec(),
            order: st.sweep.order().as_slice().iter().map(|&b| m.basis(b).to_vec()).collect(),
            ip_sets: st.restriction.sets.iter().map(|r| r.to_vec()).collect(),
            region_hash: st.region_hash.clone(),
        })
        .collect();
    let posets = s
        .posets()?
        .into_iter()
        .map(|e| PosetSummary {
            id: e.id,
            class: e.class,
            sweeps: e.sweeps,
        })
        .collect();
    Ok(StoreView {
        revision,
        sweeps,
        posets,
    })
}

async fn store(State(state): State<Arc<AppState>>) -> Result<Json<StoreView>, ApiError> {
    let (s, revision) = state.snapshot();
    Ok(Json(store_view(&s, revision)?))
}

/// Search parameters as posted by clients. Numbers in `w` and `initial`
/// may be JSON numbers or strings such as `"-6.54"` or `"1/3"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchRequest {
    pub vfav: Vec<usize>,
    #[serde(default)]
    pub pivots: Vec<usize>,
    #[serde(default = "default_limit")]
    pub limit: usize,
    #[serde(default = "default_misses")]
    pub misses: usize,
    #[serde(default)]
    pub w: Option<Value>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub initial: Option<Vec<Value>>,
    #[serde(default)]
    pub perturb_ties: bool,
    /// Store revision the client last saw; a stale value is a conflict.
    #[serde(default)]
    pub revision: Option<u64>,
}

fn default_limit() -> usize {
    3
}

fn default_misses() -> usize {
    50
}

fn rational_of(v: &Value) -> Result<Rational, ApiError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(bad_request(format!("expected a number, got {other}"))),
    };
    parse_rational(&text).map_err(|e| bad_request(e.to_string()))
}

impl SearchRequest {
    fn to_params(&self, n: usize) -> Result<SearchParams, ApiError> {
        let vfav = ElementSet::try_from_elements(&self.vfav, n).map_err(|e| bad_request(e.to_string()))?;
        let mut p = SearchParams::new(vfav);
        p.pivots = self.pivots.clone();
        p.limit = self.limit;
        p.misses = self.misses;
        if let Some(w) = &self.w {
            p.w = rational_of(w)?;
        }
        p.seed = self.seed;
        p.initial = self
            .initial
            .as_ref()
            .map(|vals| vals.iter().map(rational_of).collect::<Result<Vec<_>, _>>().map(Functional::new))
            .transpose()?;
        p.perturb_ties = self.perturb_ties;
        Ok(p)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SearchResponse {
    pub added: usize,
    pub store: StoreView,
}

async fn search(State(state): State<Arc<AppState>>, Json(req): Json<SearchRequest>) -> Result<Json<SearchResponse>, ApiError> {
    mutate(state, req, false).await
}

async fn update(State(state): State<Arc<AppState>>, Json(req): Json<SearchRequest>) -> Result<Json<SearchResponse>, ApiError> {
    mutate(state, req, true).await
}

async fn mutate(state: Arc<AppState>, req: SearchRequest, merge: bool) -> Result<Json<SearchResponse>, ApiError> {
    let _job = state.job.lock().await;
    let (mut session, revision) = state.snapshot();
    if req.revision.is_some_and(|r| r != revision) {
        return Err(ApiError(
            StatusCode::CONFLICT,
            format!("store is at revision {revision}, request was based on {}", req.revision.unwrap_or(0)),
        ));
    }
    let params = req.to_params(session.matroid.ground_size())?;
    let (session, added) = tokio::task::spawn_blocking(move || {
        let added = if merge {
            session.update(params)
        } else {
            session.search(params)
        };
        added.map(|a| (session, a))
    })
    .await
    .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    if let Some(path) = &state.path {
        session.save(path)?;
    }
    let view = store_view(&session, revision + 1)?;
    {
        let mut v = state.session.lock().expect("session lock");
        v.session = session;
        v.revision = revision + 1;
    }
    Ok(Json(SearchResponse { added, store: view }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PosetView {
    #[serde(flatten)]
    pub analysis: PosetAnalysis,
    pub poset: PosetJson,
}

async fn poset(State(state): State<Arc<AppState>>, Path(id): Path<usize>) -> Result<Json<PosetView>, ApiError> {
    let (s, _) = state.snapshot();
    let entry = s
        .posets()?
        .into_iter()
        .nth(id)
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no poset {id}")))?;
    let labeling = find_pure_labeling(&entry.poset).map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(Json(PosetView {
        poset: entry.poset.to_json(),
        analysis: PosetAnalysis {
            id: entry.id,
            class: entry.class,
            sweeps: entry.sweeps,
            structure: check_structure(&entry.poset),
            labeling,
        },
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepView {
    pub id: usize,
    pub rows: Vec<TableRow>,
    pub sweep: SweepJson,
}

async fn sweep(State(state): State<Arc<AppState>>, Path(id): Path<usize>) -> Result<Json<SweepView>, ApiError> {
    let (s, _) = state.snapshot();
    let stored = s
        .store
        .get(id)
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no sweep {id}")))?;
    Ok(Json(SweepView {
        id,
        rows: sweep_table(&s.matroid, stored),
        sweep: stored.sweep.to_json(&s.matroid),
    }))
}
