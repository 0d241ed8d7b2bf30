//! JSON HTTP API over the session store.
//!
//! Mutations hold a per-session lock across load, change and save, and the
//! session document is persisted before the response is sent. LLM calls run
//! on the blocking pool.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ontowb_core::align::{ReviewDecision, Verdict};
use ontowb_core::ontology::{EntityKind, Iri, Label, Ontology};
use ontowb_core::ReviewError;
use ontowb_llm::{Clock, Engine, Gateway, Supervision, WorkflowError, WorkflowSession};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::inputs::HumanInputSpec;
use crate::report::{self, MetricsSummary, ReportError, REPORT_SCHEMA_VERSION};
use crate::store::{SessionStore, StoreError};

pub const API_SCHEMA_VERSION: u32 = 1;

pub struct AppState {
    pub store: SessionStore,
    pub gold: Option<Ontology>,
    pub gateway: Arc<Gateway>,
    pub clock: Arc<dyn Clock>,
    locks: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
}

impl AppState {
    pub fn new(store: SessionStore, gold: Option<Ontology>, gateway: Arc<Gateway>, clock: Arc<dyn Clock>) -> Self {
        Self { store, gold, gateway, clock, locks: Mutex::new(HashMap::new()) }
    }

    fn lock_for(&self, id: &str) -> Arc<tokio::sync::Mutex<()>> {
        self.locks.lock().expect("lock table").entry(id.to_string()).or_default().clone()
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self { status, code, message: message.into() }
    }

    fn unprocessable(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "malformedBody", message)
    }

    fn conflict(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, code, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({
            "schemaVersion": API_SCHEMA_VERSION,
            "error": { "code": self.code, "message": self.message },
        });
        (self.status, Json(body)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound(_) | StoreError::InvalidId(_) => Self::new(StatusCode::NOT_FOUND, "unknownSession", e.to_string()),
            _ => Self::new(StatusCode::INTERNAL_SERVER_ERROR, "storage", e.to_string()),
        }
    }
}

impl From<ReportError> for ApiError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Review(ReviewError::NotAFalsePositive(_)) => Self::conflict("notAFalsePositive", e.to_string()),
            ReportError::NoGold(_) => Self::conflict("noAlignment", e.to_string()),
            _ => Self::unprocessable(e.to_string()),
        }
    }
}

impl From<WorkflowError> for ApiError {
    fn from(e: WorkflowError) -> Self {
        match e {
            WorkflowError::WrongState { .. }
            | WorkflowError::WrongMethodology { .. }
            | WorkflowError::HumanInputRequired(_)
            | WorkflowError::UnexpectedHumanInput(_)
            | WorkflowError::MissingArtifact(_)
            | WorkflowError::Supervisor(_) => Self::conflict("wrongStep", e.to_string()),
            WorkflowError::Llm(_) => Self::new(StatusCode::BAD_GATEWAY, "provider", e.to_string()),
            _ => Self::unprocessable(e.to_string()),
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::unprocessable(e.to_string()))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutationQuery {
    /// Expected current revision; a mismatch is a conflict.
    pub revision: Option<u64>,
    pub kind: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
pub struct KindQuery {
    pub kind: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
pub struct FormatQuery {
    pub format: Option<String>,
}

fn parse_kind(kind: Option<&str>) -> ApiResult<EntityKind> {
    kind.map_or(Ok(EntityKind::Class), |k| k.parse().map_err(|e: ontowb_core::OntologyError| ApiError::unprocessable(e.to_string())))
}

fn check_revision(s: &WorkflowSession, expected: Option<u64>) -> ApiResult<()> {
    match expected {
        Some(r) if r != s.revision => Err(ApiError::conflict(
            "staleRevision",
            format!("session {} is at revision {}, not {r}", s.id, s.revision),
        )),
        _ => Ok(()),
    }
}

/// A review decision as submitted by a client; the server stamps missing
/// timestamps.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DecisionInput {
    pub generated_iri: Iri,
    pub verdict: Verdict,
    #[serde(default)]
    pub rationale: String,
    #[serde(default)]
    pub reviewer: String,
    #[serde(default)]
    pub timestamp: Option<chrono::DateTime<chrono::Utc>>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct SessionEnvelope<'a> {
    schema_version: u32,
    session: &'a WorkflowSession,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AdvanceBody {
    input: Option<HumanInputSpec>,
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", get(list_sessions))
        .route("/sessions/:id", get(get_session))
        .route("/sessions/:id/alignment", get(get_alignment))
        .route("/sessions/:id/decisions", post(post_decisions))
        .route("/sessions/:id/advance", post(post_advance))
        .route("/sessions/:id/supervise", post(post_supervise))
        .route("/sessions/:id/report", get(get_report))
        .route("/gold/entities", get(gold_entities))
        .with_state(state)
}

async fn list_sessions(State(st): State<Arc<AppState>>) -> ApiResult<Json<Value>> {
    let sessions = st.store.list()?;
    Ok(Json(json!({ "schemaVersion": API_SCHEMA_VERSION, "sessions": sessions })))
}

async fn get_session(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    let s = st.store.load(&id)?;
    Ok(Json(SessionEnvelope { schema_version: API_SCHEMA_VERSION, session: &s }).into_response())
}

async fn get_alignment(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    q: Result<Query<KindQuery>, QueryRejection>,
) -> ApiResult<Json<Value>> {
    let Query(q) = q.map_err(|e| ApiError::unprocessable(e.body_text()))?;
    let s = st.store.load(&id)?;
    let kind = parse_kind(q.kind.as_deref())?;
    let outcome = report::session_alignment(&s, kind)?;
    Ok(Json(json!({
        "schemaVersion": API_SCHEMA_VERSION,
        "sessionId": s.id,
        "revision": s.revision,
        "kind": kind,
        "report": outcome.report,
        "before": MetricsSummary::from(outcome.before),
        "after": MetricsSummary::from(outcome.after),
    })))
}

async fn post_decisions(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    q: Result<Query<MutationQuery>, QueryRejection>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let Query(q) = q.map_err(|e| ApiError::unprocessable(e.body_text()))?;
    let inputs: Vec<DecisionInput> = parse_body(&body)?;
    let kind = parse_kind(q.kind.as_deref())?;
    let lock = st.lock_for(&id);
    let _guard = lock.lock().await;
    let mut s = st.store.load(&id)?;
    check_revision(&s, q.revision)?;
    let decisions: Vec<ReviewDecision> = inputs
        .into_iter()
        .map(|d| ReviewDecision {
            generated_iri: d.generated_iri,
            verdict: d.verdict,
            rationale: d.rationale,
            reviewer: d.reviewer,
            timestamp: d.timestamp.unwrap_or_else(|| st.clock.now()),
        })
        .collect();
    let outcome = report::review_step(&s, kind, &decisions)?;
    s.decisions.extend(decisions);
    s.touch(st.clock.as_ref());
    st.store.save(&s)?;
    Ok(Json(json!({
        "schemaVersion": API_SCHEMA_VERSION,
        "sessionId": s.id,
        "revision": s.revision,
        "kind": kind,
        "involvementLevel": s.involvement_level,
        "report": outcome.report,
        "before": MetricsSummary::from(outcome.before),
        "after": MetricsSummary::from(outcome.after),
    })))
}

/// Runs `f` against the session on the blocking pool.
async fn run_blocking<F>(st: &Arc<AppState>, mut s: WorkflowSession, f: F) -> ApiResult<WorkflowSession>
where
    F: FnOnce(&Engine<'_>, &mut WorkflowSession) -> Result<(), WorkflowError> + Send + 'static,
{
    let gateway = st.gateway.clone();
    let clock = st.clock.clone();
    let (s, result) = tokio::task::spawn_blocking(move || {
        let engine = Engine::new(&gateway, clock.as_ref());
        let r = f(&engine, &mut s);
        (s, r)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?;
    result?;
    Ok(s)
}

async fn post_advance(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    q: Result<Query<MutationQuery>, QueryRejection>,
    body: Bytes,
) -> ApiResult<Response> {
    let Query(q) = q.map_err(|e| ApiError::unprocessable(e.body_text()))?;
    let body: AdvanceBody = if body.iter().all(u8::is_ascii_whitespace) { AdvanceBody::default() } else { parse_body(&body)? };
    let input = body
        .input
        .map(|spec| spec.resolve(None))
        .transpose()
        .map_err(|e| ApiError::unprocessable(e.to_string()))?;
    let lock = st.lock_for(&id);
    let _guard = lock.lock().await;
    let s = st.store.load(&id)?;
    check_revision(&s, q.revision)?;
    let s = run_blocking(&st, s, move |engine, s| engine.run_xhcome_step(s, input)).await?;
    st.store.save(&s)?;
    Ok(Json(SessionEnvelope { schema_version: API_SCHEMA_VERSION, session: &s }).into_response())
}

async fn post_supervise(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    q: Result<Query<MutationQuery>, QueryRejection>,
    body: Bytes,
) -> ApiResult<Response> {
    let Query(q) = q.map_err(|e| ApiError::unprocessable(e.body_text()))?;
    let decision: Supervision = parse_body(&body)?;
    let lock = st.lock_for(&id);
    let _guard = lock.lock().await;
    let mut s = st.store.load(&id)?;
    check_revision(&s, q.revision)?;
    Engine::new(&st.gateway, st.clock.as_ref()).apply_supervision(&mut s, decision)?;
    // Persist the decision before running the next round so a provider
    // failure leaves the session ready to retry the round.
    st.store.save(&s)?;
    if let ontowb_llm::SessionState::SimxRound { .. } = s.state {
        s = run_blocking(&st, s, |engine, s| engine.run_simx_round(s).map(|_| ())).await?;
        st.store.save(&s)?;
    }
    Ok(Json(SessionEnvelope { schema_version: API_SCHEMA_VERSION, session: &s }).into_response())
}

async fn get_report(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    q: Result<Query<FormatQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let Query(q) = q.map_err(|e| ApiError::unprocessable(e.body_text()))?;
    let s = st.store.load(&id)?;
    let r = report::build_report(&s)?;
    match q.format.as_deref() {
        None | Some("json") => Ok(Json(r).into_response()),
        Some("markdown") => Ok(([(header::CONTENT_TYPE, "text/markdown; charset=utf-8")], report::render_markdown(&r)).into_response()),
        Some(other) => Err(ApiError::unprocessable(format!("unknown format {other:?}"))),
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct GoldEntity<'a> {
    iri: &'a Iri,
    local_name: &'a str,
    labels: &'a [Label],
}

async fn gold_entities(State(st): State<Arc<AppState>>) -> ApiResult<Json<Value>> {
    let gold = st
        .gold
        .as_ref()
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "noGold", "the service was started without a gold ontology"))?;
    let list = |kind| {
        gold.entities(kind)
            .values()
            .map(|e| GoldEntity { iri: &e.iri, local_name: e.iri.local_name(), labels: &e.labels })
            .collect::<Vec<_>>()
    };
    Ok(Json(json!({
        "schemaVersion": REPORT_SCHEMA_VERSION,
        "classes": list(EntityKind::Class),
        "objectProperties": list(EntityKind::ObjectProperty),
    })))
}

pub async fn serve(addr: std::net::SocketAddr, state: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(%addr, "serving");
    axum::serve(listener, router(state)).await
}
