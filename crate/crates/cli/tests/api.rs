mod common;

use std::path::Path;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use ontowb_cli::api::{router, AppState};
use ontowb_cli::store::SessionStore;
use ontowb_llm::prompts::pd_bindings;
use ontowb_llm::provider::ScriptedProvider;
use ontowb_llm::{Cassette, CassetteMode, Engine, Gateway, LogicalClock, Methodology, SessionState, WorkflowSession};
use serde_json::{json, Value};
use tower::ServiceExt;

use common::*;

const CHATGPT35: &str = "xhcome-chatgpt35";

fn app(sessions: &Path, gateway: Gateway) -> Router {
    let state = AppState::new(SessionStore::new(sessions), Some(gold()), Arc::new(gateway), Arc::new(LogicalClock::default()));
    router(Arc::new(state))
}

fn offline() -> Gateway {
    Gateway::isolated(Cassette::in_memory(CassetteMode::Passthrough))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(|b| Body::from(b.to_string())).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()));
    (status, value)
}

fn chatgpt35_sessions() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = replay_xhcome(dir.path(), "chatgpt35-xhcome", "openai", "gpt-3.5-turbo", CHATGPT35);
    assert_eq!(code, 0, "{err}");
    dir
}

fn display(v: &Value) -> (String, String, String) {
    let d = &v["display"];
    (d["precision"].as_str().unwrap().into(), d["recall"].as_str().unwrap().into(), d["f1"].as_str().unwrap().into())
}

fn decisions_body(n: usize) -> String {
    let all: Vec<Value> = serde_json::from_slice(&std::fs::read(fixture("decisions/chatgpt35-xhcome.json")).unwrap()).unwrap();
    assert_eq!(all.len(), 13);
    serde_json::to_string(&all[..n]).unwrap()
}

#[tokio::test]
async fn list_on_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir.path().join("missing"), offline());
    let (status, body) = call(&app, "GET", "/sessions", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({ "schemaVersion": 1, "sessions": [] }));
}

#[tokio::test]
async fn unknown_session_is_404() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path(), offline());
    for uri in ["/sessions/nope", "/sessions/nope/alignment", "/sessions/nope/report", "/sessions/..%2Fx"] {
        let (status, body) = call(&app, "GET", uri, None).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{uri}");
        assert_eq!(body["schemaVersion"], 1);
        assert!(body["error"]["code"].is_string());
    }
    let (status, _) = call(&app, "POST", "/sessions/nope/decisions", Some("[]")).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn alignment_lists_false_positives_and_matches_cli() {
    let dir = chatgpt35_sessions();
    let app = app(dir.path(), offline());
    let (status, body) = call(&app, "GET", &format!("/sessions/{CHATGPT35}/alignment?kind=class"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["report"]["falsePositives"].as_array().unwrap().len(), 15);
    assert_eq!(body["before"]["tp"], 10);
    assert_eq!(display(&body["before"]), ("40%".into(), "24%".into(), "30%".into()));

    let (code, out, _) = cli(&[
        "evaluate",
        "--generated",
        &fixture_str("generated/chatgpt35-xhcome.ttl"),
        "--gold",
        &fixture_str("gold/pd-gold.ttl"),
    ]);
    assert_eq!(code, 0);
    let cli: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(cli["metrics"], body["before"]);
}

#[tokio::test]
async fn decisions_update_metrics_and_persist() {
    let dir = chatgpt35_sessions();
    let app = app(dir.path(), offline());
    let revision = SessionStore::new(dir.path()).load(CHATGPT35).unwrap().revision;
    let (status, body) = call(
        &app,
        "POST",
        &format!("/sessions/{CHATGPT35}/decisions?kind=class&revision={revision}"),
        Some(&decisions_body(13)),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["schemaVersion"], 1);
    assert_eq!(display(&body["before"]), ("40%".into(), "24%".into(), "30%".into()));
    assert_eq!(display(&body["after"]), ("92%".into(), "56%".into(), "70%".into()));
    assert_eq!(body["involvementLevel"], 5);

    let stored = SessionStore::new(dir.path()).load(CHATGPT35).unwrap();
    assert_eq!(stored.decisions.len(), 13);
    assert_eq!(stored.revision, revision + 1);

    let (_, alignment) = call(&app, "GET", &format!("/sessions/{CHATGPT35}/alignment"), None).await;
    assert_eq!(display(&alignment["after"]), ("92%".into(), "56%".into(), "70%".into()));
    let (_, report) = call(&app, "GET", &format!("/sessions/{CHATGPT35}/report"), None).await;
    assert_eq!(report["reviewApplied"], true);
    assert_eq!(report["classMetrics"]["tp"], 23);
}

#[tokio::test]
async fn empty_decision_list_changes_nothing() {
    let dir = chatgpt35_sessions();
    let app = app(dir.path(), offline());
    let (status, body) = call(&app, "POST", &format!("/sessions/{CHATGPT35}/decisions"), Some("[]")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["before"], body["after"]);
}

#[tokio::test]
async fn conflicts() {
    let dir = chatgpt35_sessions();
    let app = app(dir.path(), offline());
    let tp = json!([{ "generatedIri": "http://llm.example.org/chatgpt35/xhcome#Bradykinesia", "verdict": "ReclassifyToTP" }]);
    let (status, body) =
        call(&app, "POST", &format!("/sessions/{CHATGPT35}/decisions"), Some(&tp.to_string())).await;
    assert_eq!(status, StatusCode::CONFLICT, "{body}");

    let (status, body) =
        call(&app, "POST", &format!("/sessions/{CHATGPT35}/decisions?revision=0"), Some(&decisions_body(1))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"]["code"], "staleRevision");

    // Reclassifying the same entity twice: the second targets a TP.
    let (status, _) = call(&app, "POST", &format!("/sessions/{CHATGPT35}/decisions"), Some(&decisions_body(1))).await;
    assert_eq!(status, StatusCode::OK);
    let (status, _) = call(&app, "POST", &format!("/sessions/{CHATGPT35}/decisions"), Some(&decisions_body(1))).await;
    assert_eq!(status, StatusCode::CONFLICT);

    // The session is finished; advancing is a wrong-step conflict.
    let (status, _) = call(&app, "POST", &format!("/sessions/{CHATGPT35}/advance"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = call(&app, "POST", &format!("/sessions/{CHATGPT35}/supervise"), Some(r#"{"action":"Stop"}"#)).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(SessionStore::new(dir.path()).load(CHATGPT35).unwrap().decisions.len(), 1);
}

#[tokio::test]
async fn malformed_bodies_are_422() {
    let dir = chatgpt35_sessions();
    let app = app(dir.path(), offline());
    let uri = format!("/sessions/{CHATGPT35}/decisions");
    for body in ["{", "{}", r#"[{"generatedIri": "x", "verdict": "ReclassifyToTP"}]"#, r#"[{"verdict": "Maybe"}]"#] {
        let (status, resp) = call(&app, "POST", &uri, Some(body)).await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
        assert_eq!(resp["error"]["code"], "malformedBody");
    }
    let (status, _) = call(&app, "POST", &format!("{uri}?kind=individual"), Some("[]")).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = call(&app, "GET", &format!("/sessions/{CHATGPT35}/report?format=pdf"), None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = call(&app, "POST", &format!("/sessions/{CHATGPT35}/supervise"), Some(r#"{"action":"Pause"}"#)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn bard_full_reclassification_reports_negative_fn() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = replay_xhcome(dir.path(), "bard-xhcome", "bard", "bard", "bard");
    assert_eq!(code, 0, "{err}");
    let app = app(dir.path(), offline());
    let body = std::fs::read_to_string(fixture("decisions/bard-xhcome.json")).unwrap();
    let (status, resp) = call(&app, "POST", "/sessions/bard/decisions", Some(&body)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(resp["after"]["fn"], -9);
    assert_eq!(display(&resp["after"]), ("100%".into(), "122%".into(), "110%".into()));
    assert!(resp["after"]["flags"].as_array().unwrap().contains(&json!("NegativeFN")));
}

#[tokio::test]
async fn markdown_report_and_gold_entities() {
    let dir = chatgpt35_sessions();
    let app = app(dir.path(), offline());
    let (status, text) = call(&app, "GET", &format!("/sessions/{CHATGPT35}/report?format=markdown"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(text.as_str().unwrap().contains("| 25 | 10 | 15 | 31 | 40% | 24% | 30% |"), "{text}");
    let (status, gold) = call(&app, "GET", "/gold/entities", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(gold["classes"].as_array().unwrap().len(), 41);
    assert_eq!(gold["objectProperties"].as_array().unwrap().len(), 16);

    let no_gold = router(Arc::new(AppState::new(
        SessionStore::new(dir.path()),
        None,
        Arc::new(offline()),
        Arc::new(LogicalClock::default()),
    )));
    let (status, _) = call(&no_gold, "GET", "/gold/entities", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (_, list) = call(&app, "GET", "/sessions", None).await;
    assert_eq!(list["sessions"][0]["id"], CHATGPT35);
}

fn ontology_reply(classes: &[&str]) -> String {
    let body: String = classes.iter().map(|c| format!(":{c} a owl:Class .\n")).collect();
    format!(
        "```turtle\n@prefix : <http://llm.example.org/t#> .\n@prefix owl: <http://www.w3.org/2002/07/owl#> .\n<http://llm.example.org/t> a owl:Ontology .\n{body}```"
    )
}

#[tokio::test]
async fn supervise_injects_guidance_and_runs_next_round() {
    let dir = tempfile::tempdir().unwrap();
    let store = SessionStore::new(dir.path());
    let clock = LogicalClock::default();
    let gw = Gateway::isolated(Cassette::in_memory(CassetteMode::Passthrough));
    gw.register("p", Box::new(ScriptedProvider::new(["kw", "de", &ontology_reply(&["Patient"])])));
    let mut s = WorkflowSession::new("simx", Methodology::SimXHcomePlus, "p", "m", pd_bindings(), &clock);
    Engine::new(&gw, &clock).run_simx_round(&mut s).unwrap();
    assert_eq!(s.state, SessionState::SimxAwaitingSupervision { round: 1 });
    store.save(&s).unwrap();

    let next = Gateway::isolated(Cassette::in_memory(CassetteMode::Passthrough));
    next.register("p", Box::new(ScriptedProvider::new(["kw2", "de2", &ontology_reply(&["Patient", "Gait"])])));
    let app = app(dir.path(), next);
    let (status, body) = call(
        &app,
        "POST",
        "/sessions/simx/supervise",
        Some(r#"{"action": "InjectGuidance", "text": "Model gait as well."}"#),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["session"]["state"]["label"], "SimxAwaitingSupervision");
    let stored = store.load("simx").unwrap();
    assert_eq!(stored.state, SessionState::SimxAwaitingSupervision { round: 2 });
    assert!(stored.transcript.turns.iter().any(|t| t.prompt == "Model gait as well."));
    // The guidance is in the context of the next round's first prompt.
    let kw2 = stored.transcript.turns.iter().find(|t| t.response == "kw2").unwrap();
    assert!(kw2.prompt.contains("Model gait as well."));
    assert_eq!(stored.final_ontology().unwrap().classes.len(), 2);

    let (status, body) = call(&app, "POST", "/sessions/simx/supervise", Some(r#"{"action": "Stop"}"#)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["session"]["state"]["label"], "Done");
}

#[tokio::test]
async fn advance_walks_xhcome_steps() {
    let dir = tempfile::tempdir().unwrap();
    let store = SessionStore::new(dir.path());
    let s = WorkflowSession::new("x", Methodology::XHcome, "p", "m", pd_bindings(), &LogicalClock::default());
    store.save(&s).unwrap();
    let gw = Gateway::isolated(Cassette::in_memory(CassetteMode::Passthrough));
    gw.register("p", Box::new(ScriptedProvider::new([ontology_reply(&["Patient", "Rigidity"])])));
    let app = app(dir.path(), gw);

    // Step 1 needs human input.
    let (status, _) = call(&app, "POST", "/sessions/x/advance", None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let requirements = json!({ "input": {
        "type": "requirements", "scope": "s", "aim": "a", "requirements": "r",
        "competencyQuestions": ["Which sensors are worn?"]
    }});
    let (status, body) = call(&app, "POST", "/sessions/x/advance", Some(&requirements.to_string())).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["session"]["state"], json!({ "label": "XHcome", "step": 2 }));

    // Step 2 is an LLM step; human input is a conflict.
    let (status, _) = call(&app, "POST", "/sessions/x/advance", Some(&requirements.to_string())).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, body) = call(&app, "POST", "/sessions/x/advance", Some(r#"{"input": null}"#)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["session"]["pendingHumanAction"].as_str().is_some(), true);

    // Ontologies arrive inline; paths are refused.
    let by_path = json!({ "input": { "type": "alignmentReview", "gold": { "path": "/etc/passwd" } } });
    let (status, _) = call(&app, "POST", "/sessions/x/advance", Some(&by_path.to_string())).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let gold = std::fs::read_to_string(fixture("gold/pd-gold.ttl")).unwrap();
    let review = json!({ "input": { "type": "alignmentReview", "gold": { "turtle": gold } } });
    let (status, body) = call(&app, "POST", "/sessions/x/advance", Some(&review.to_string())).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(store.load("x").unwrap().state, SessionState::XHcome { step: 4 });
    let (_, alignment) = call(&app, "GET", "/sessions/x/alignment", None).await;
    assert_eq!(alignment["before"]["tp"], 1);
    assert_eq!(alignment["before"]["fp"], 1);
}
