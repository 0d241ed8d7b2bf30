//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use ontowb_core::ontology::Ontology;
use ontowb_core::turtle::parse_turtle;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures().join(rel)
}

pub fn fixture_str(rel: &str) -> String {
    fixture(rel).display().to_string()
}

pub fn load_ontology(rel: &str) -> Ontology {
    let text = std::fs::read_to_string(fixture(rel)).unwrap();
    parse_turtle(&text).into_result().unwrap()
}

pub fn gold() -> Ontology {
    load_ontology("gold/pd-gold.ttl")
}

/// Runs the CLI in-process; returns (exit code, stdout, stderr).
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ontowb").chain(args.iter().copied());
    let code = ontowb_cli::commands::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Replays a bundled X-HCOME run into `sessions` under `id`.
pub fn replay_xhcome(sessions: &Path, slug: &str, provider: &str, model: &str, id: &str) -> (i32, String, String) {
    cli(&[
        "generate",
        "--method",
        "xhcome",
        "--provider",
        provider,
        "--model",
        model,
        "--cassette",
        &fixture_str(&format!("cassettes/{slug}.jsonl")),
        "--replay",
        "--script",
        &fixture_str(&format!("scripts/{slug}.json")),
        "--gold",
        &fixture_str("gold/pd-gold.ttl"),
        "--sessions",
        &sessions.display().to_string(),
        "--session-id",
        id,
    ])
}
