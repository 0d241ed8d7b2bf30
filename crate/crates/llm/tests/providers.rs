//! HTTP providers against a local fake server, retries, and cassettes.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;

use ontowb_llm::cassette::request_hash;
use ontowb_llm::provider::{ProviderConfig, ScriptedProvider};
use ontowb_llm::{Cassette, CassetteMode, Gateway, LlmError, ProviderError, RetryPolicy};
use serde_json::{json, Value};

#[derive(Debug, Clone)]
struct Received {
    path: String,
    headers: Vec<(String, String)>,
    body: Value,
}

impl Received {
    fn header(&self, name: &str) -> Option<&str> {
        self.headers.iter().find(|(k, _)| k.eq_ignore_ascii_case(name)).map(|(_, v)| v.as_str())
    }
}

/// Serves one scripted `(status, body)` per connection, in order.
fn fake_server(replies: Vec<(u16, String)>) -> (String, Arc<Mutex<Vec<Received>>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}", listener.local_addr().unwrap());
    let log = Arc::new(Mutex::new(Vec::new()));
    let sink = log.clone();
    thread::spawn(move || {
        for (status, body) in replies {
            let (stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut line = String::new();
            reader.read_line(&mut line).unwrap();
            let path = line.split_whitespace().nth(1).unwrap_or("").to_string();
            let mut headers = Vec::new();
            loop {
                let mut h = String::new();
                reader.read_line(&mut h).unwrap();
                let h = h.trim_end();
                if h.is_empty() {
                    break;
                }
                let (k, v) = h.split_once(':').unwrap();
                headers.push((k.trim().to_string(), v.trim().to_string()));
            }
            let len: usize = headers
                .iter()
                .find(|(k, _)| k.eq_ignore_ascii_case("content-length"))
                .map_or(0, |(_, v)| v.parse().unwrap());
            let mut buf = vec![0; len];
            reader.read_exact(&mut buf).unwrap();
            sink.lock().unwrap().push(Received {
                path,
                headers,
                body: serde_json::from_slice(&buf).unwrap_or(Value::Null),
            });
            let mut stream = stream;
            let resp = format!(
                "HTTP/1.1 {status} X\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
                body.len()
            );
            stream.write_all(resp.as_bytes()).unwrap();
        }
    });
    (url, log)
}

fn config(provider: &str, url: &str) -> ProviderConfig {
    let url = url.to_string();
    ProviderConfig::from_lookup(provider, move |k| {
        if k.ends_with("_BASE_URL") {
            Some(url.clone())
        } else {
            Some("secret".into())
        }
    })
    .unwrap()
}

#[test]
fn openai_compatible_request_and_reply() {
    let reply = json!({"choices": [{"message": {"content": "hello"}}], "usage": {"prompt_tokens": 7, "completion_tokens": 2}});
    let (url, log) = fake_server(vec![(200, reply.to_string())]);
    let p = config("chatgpt", &url).build().unwrap();
    let c = p.complete("gpt-4", "hi", Some(0.2)).unwrap();
    assert_eq!((c.text.as_str(), c.input_tokens, c.output_tokens), ("hello", Some(7), Some(2)));
    let r = &log.lock().unwrap()[0];
    assert_eq!(r.path, "/chat/completions");
    assert_eq!(r.header("authorization"), Some("Bearer secret"));
    assert_eq!(r.body["messages"][0]["content"], "hi");
    assert_eq!(r.body["temperature"], 0.2);
}

#[test]
fn anthropic_request_and_reply() {
    let reply = json!({"content": [{"type": "text", "text": "rule"}], "usage": {"input_tokens": 3, "output_tokens": 1}});
    let (url, log) = fake_server(vec![(200, reply.to_string())]);
    let p = config("claude", &url).build().unwrap();
    assert_eq!(p.complete("claude-3", "q", None).unwrap().text, "rule");
    let r = &log.lock().unwrap()[0];
    assert_eq!(r.path, "/v1/messages");
    assert_eq!(r.header("x-api-key"), Some("secret"));
    assert_eq!(r.header("anthropic-version"), Some("2023-06-01"));
    assert!(r.body.get("temperature").is_none());
}

#[test]
fn gemini_request_and_reply() {
    let reply = json!({"candidates": [{"content": {"parts": [{"text": "ttl"}]}}]});
    let (url, log) = fake_server(vec![(200, reply.to_string())]);
    let p = config("gemini", &url).build().unwrap();
    assert_eq!(p.complete("gemini-pro", "q", None).unwrap().text, "ttl");
    let r = &log.lock().unwrap()[0];
    assert_eq!(r.path, "/v1beta/models/gemini-pro:generateContent");
    assert_eq!(r.header("x-goog-api-key"), Some("secret"));
    assert_eq!(r.body["contents"][0]["parts"][0]["text"], "q");
}

#[test]
fn status_classification() {
    let (url, _) = fake_server(vec![(503, "{}".into()), (429, "{}".into()), (400, "{}".into()), (200, "{}".into())]);
    let p = config("chatgpt", &url).build().unwrap();
    assert!(p.complete("m", "x", None).unwrap_err().is_transient());
    assert!(p.complete("m", "x", None).unwrap_err().is_transient());
    assert!(matches!(p.complete("m", "x", None), Err(ProviderError::Fatal(_))));
    // A success without the expected field is not retried.
    assert!(matches!(p.complete("m", "x", None), Err(ProviderError::Fatal(_))));
}

#[test]
fn gateway_retries_transient_failures_over_http() {
    let ok = json!({"choices": [{"message": {"content": "done"}}]}).to_string();
    let (url, log) = fake_server(vec![(503, "{}".into()), (502, "{}".into()), (200, ok)]);
    let gw = Gateway::isolated(Cassette::in_memory(CassetteMode::Passthrough)).with_retry(RetryPolicy::immediate());
    gw.register("chatgpt", config("chatgpt", &url).build().unwrap());
    assert_eq!(gw.complete("chatgpt", "m", "p").unwrap(), "done");
    assert_eq!(log.lock().unwrap().len(), 3);
}

#[test]
fn gateway_gives_up_after_three_retries() {
    let p = ScriptedProvider::default();
    for _ in 0..5 {
        p.push(Err(ProviderError::Transient("down".into())));
    }
    let gw = Gateway::isolated(Cassette::in_memory(CassetteMode::Passthrough)).with_retry(RetryPolicy::immediate());
    gw.register("x", Box::new(p));
    match gw.complete("x", "m", "p") {
        Err(LlmError::Provider { attempts, .. }) => assert_eq!(attempts, 4),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn gateway_does_not_retry_fatal_errors() {
    let p = ScriptedProvider::default();
    p.push(Err(ProviderError::Fatal("bad request".into())));
    p.push(Ok(ontowb_llm::provider::Completion::text("late")));
    let gw = Gateway::isolated(Cassette::in_memory(CassetteMode::Passthrough)).with_retry(RetryPolicy::immediate());
    gw.register("x", Box::new(p));
    assert!(matches!(gw.complete("x", "m", "p"), Err(LlmError::Provider { attempts: 1, .. })));
}

#[test]
fn unregistered_provider_is_unconfigured() {
    let gw = Gateway::isolated(Cassette::in_memory(CassetteMode::Passthrough));
    assert!(matches!(gw.complete("nobody", "m", "p"), Err(LlmError::Unconfigured(..))));
}

#[test]
fn record_then_replay_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/run.jsonl");
    {
        let gw = Gateway::isolated(Cassette::open(&path, CassetteMode::Record).unwrap()).with_temperature(Some(0.0));
        gw.register("gemini", Box::new(ScriptedProvider::new(["first", "second"])));
        assert_eq!(gw.complete("gemini", "pro", "a").unwrap(), "first");
        assert_eq!(gw.complete("gemini", "pro", "b").unwrap(), "second");
    }
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["hash"], request_hash("gemini", "pro", "a"));
    assert_eq!(first["temperature"], 0.0);

    // Replay needs no provider at all.
    let gw = Gateway::isolated(Cassette::open(&path, CassetteMode::Replay).unwrap());
    assert_eq!(gw.complete("gemini", "pro", "b").unwrap(), "second");
    assert_eq!(gw.complete("gemini", "pro", "a").unwrap(), "first");
    match gw.complete("gemini", "pro", "c") {
        Err(LlmError::MissingCassetteEntry { hash, .. }) => assert_eq!(hash, request_hash("gemini", "pro", "c")),
        other => panic!("unexpected {other:?}"),
    }
    // Different model, same prompt: a different key.
    assert!(gw.complete("gemini", "ultra", "a").is_err());
}

#[test]
fn replay_requires_existing_cassette() {
    let dir = tempfile::tempdir().unwrap();
    assert!(Cassette::open(dir.path().join("missing.jsonl"), CassetteMode::Replay).is_err());
}
