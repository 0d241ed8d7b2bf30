//! Workflow state machines driven by scripted providers and cassettes.

use std::sync::Arc;

use ontowb_core::ontology::EntityKind;
use ontowb_core::turtle::parse_turtle;
use ontowb_llm::prompts::{self, pd_bindings};
use ontowb_llm::provider::{Completion, LlmProvider, ScriptedProvider};
use ontowb_llm::session::{ArtifactValue, SessionFlag, Speaker};
use ontowb_llm::workflow::{Generation, NL2SWRL_STEP, XHCOME_MERGED_STEP};
use ontowb_llm::{
    Cassette, CassetteMode, Engine, Gateway, HumanInput, LogicalClock, Methodology, ProviderError, RetryPolicy,
    SessionState, Supervision, WorkflowError, WorkflowSession,
};

fn classes_ttl(names: &[&str]) -> String {
    let mut s = String::from("@prefix : <http://example.org/pd#> .\n@prefix owl: <http://www.w3.org/2002/07/owl#> .\n");
    for n in names {
        s.push_str(&format!(":{n} a owl:Class .\n"));
    }
    s
}

fn fenced(ttl: &str) -> String {
    format!("Here is the ontology:\n```turtle\n{ttl}```\nLet me know if you need changes.")
}

/// Shares one scripted provider between a gateway and the test.
struct Shared(Arc<ScriptedProvider>);

impl LlmProvider for Shared {
    fn complete(&self, model: &str, prompt: &str, t: Option<f64>) -> Result<Completion, ProviderError> {
        self.0.complete(model, prompt, t)
    }
}

fn gateway(p: ScriptedProvider) -> (Gateway, Arc<ScriptedProvider>) {
    let p = Arc::new(p);
    let gw = Gateway::isolated(Cassette::in_memory(CassetteMode::Passthrough)).with_retry(RetryPolicy::immediate());
    gw.register("llm", Box::new(Shared(p.clone())));
    (gw, p)
}

fn session(m: Methodology, clock: &LogicalClock) -> WorkflowSession {
    WorkflowSession::new("s", m, "llm", "model", pd_bindings(), clock)
}

#[test]
fn one_shot_sends_the_rendered_prompt_once() {
    let clock = LogicalClock::default();
    let (gw, p) = gateway(ScriptedProvider::new([fenced(&classes_ttl(&["Patient", "Sensor"]))]));
    let engine = Engine::new(&gw, &clock);
    let mut s = session(Methodology::OneShot, &clock);
    let out = engine.run_os(&mut s).unwrap();
    assert_eq!(out.accepted().unwrap().entity_count(EntityKind::Class), 2);
    assert_eq!(p.calls().len(), 1);
    assert_eq!(p.calls()[0].1, prompts::ONE_SHOT.render(&pd_bindings()).unwrap());
    assert_eq!(s.state, SessionState::Done);
    assert_eq!(s.involvement_level, 1);
    assert!(matches!(engine.run_os(&mut s), Err(WorkflowError::WrongState { .. })));
}

#[test]
fn one_shot_malformed_reply_is_rejected_with_diagnostics() {
    let clock = LogicalClock::default();
    let (gw, _) = gateway(ScriptedProvider::new(["```turtle\n:Patient a owl:Class\n```"]));
    let mut s = session(Methodology::OneShot, &clock);
    match Engine::new(&gw, &clock).run_os(&mut s).unwrap() {
        Generation::Rejected(d) => assert!(!d.is_empty()),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(s.artifacts[0].value, ArtifactValue::Rejected { .. }));
    assert!(s.final_ontology().is_none());
}

#[test]
fn wrong_methodology_is_refused() {
    let clock = LogicalClock::default();
    let (gw, _) = gateway(ScriptedProvider::default());
    let mut s = session(Methodology::ChainOfThought, &clock);
    assert!(matches!(Engine::new(&gw, &clock).run_os(&mut s), Err(WorkflowError::WrongMethodology { .. })));
}

#[test]
fn cot_second_prompt_carries_the_first_exchange() {
    let clock = LogicalClock::default();
    let (gw, p) = gateway(ScriptedProvider::new(["I will model patients.".to_string(), fenced(&classes_ttl(&["A"]))]));
    let mut s = session(Methodology::ChainOfThought, &clock);
    Engine::new(&gw, &clock).run_cot(&mut s).unwrap();
    let calls = p.calls();
    let p1 = prompts::COT_PROMPT_1.render(&pd_bindings()).unwrap();
    let p2 = prompts::COT_PROMPT_2.render(&pd_bindings()).unwrap();
    assert_eq!(calls[0].1, p1);
    assert_eq!(calls[1].1, format!("{p1}\n\nI will model patients.\n\n{p2}"));
    assert_eq!(s.involvement_level, 2);
}

#[test]
fn cot_failure_halts_and_resumes() {
    let clock = LogicalClock::default();
    let (gw, p) = gateway(ScriptedProvider::default());
    p.push(Err(ProviderError::Fatal("boom".into())));
    let engine = Engine::new(&gw, &clock);
    let mut s = session(Methodology::ChainOfThought, &clock);
    assert!(engine.run_cot(&mut s).is_err());
    assert_eq!(s.state, SessionState::Start);
    assert!(s.transcript.turns.is_empty());

    p.push(Ok(Completion::text("ok")));
    p.push(Err(ProviderError::Fatal("boom".into())));
    assert!(engine.run_cot(&mut s).is_err());
    assert_eq!(s.state, SessionState::CotPrompt2);

    p.push(Ok(Completion::text(fenced(&classes_ttl(&["A", "B", "C"])))));
    let out = engine.run_cot(&mut s).unwrap();
    assert_eq!(out.accepted().unwrap().classes.len(), 3);
    assert_eq!(s.transcript.turns.len(), 2);
}

fn requirements() -> HumanInput {
    HumanInput::Requirements {
        scope: prompts::PD_SCOPE.into(),
        aim: prompts::PD_AIM.into(),
        requirements: prompts::PD_REQUIREMENTS.into(),
        competency_questions: vec!["Which patients missed a dose?".into()],
    }
}

fn xhcome_provider() -> ScriptedProvider {
    ScriptedProvider::with_responder(|_, prompt| {
        Ok(Completion::text(if prompt.contains("Compare") || prompt.contains("Evaluate") {
            "Patient corresponds to Patient.".to_string()
        } else {
            fenced(&classes_ttl(&["Patient", "Tremor", "Gadget"]))
        }))
    })
}

#[test]
fn xhcome_enforces_the_step_graph() {
    let clock = LogicalClock::default();
    let (gw, p) = gateway(xhcome_provider());
    let engine = Engine::new(&gw, &clock);
    let mut s = WorkflowSession::new("x", Methodology::XHcome, "llm", "m", Default::default(), &clock);
    assert_eq!(s.state, SessionState::XHcome { step: 1 });
    assert!(s.pending_human_action.is_some());
    assert!(matches!(engine.run_xhcome_step(&mut s, None), Err(WorkflowError::HumanInputRequired(1))));
    assert!(matches!(
        engine.run_xhcome_step(&mut s, Some(HumanInput::Evaluation { notes: String::new() })),
        Err(WorkflowError::WrongHumanInput { step: 1, .. })
    ));

    engine.run_xhcome_step(&mut s, Some(requirements())).unwrap();
    assert_eq!(s.state, SessionState::XHcome { step: 2 });
    assert!(s.pending_human_action.is_none());
    assert!(matches!(engine.run_xhcome_step(&mut s, Some(requirements())), Err(WorkflowError::UnexpectedHumanInput(2))));

    engine.run_xhcome_step(&mut s, None).unwrap();
    assert!(p.calls()[0].1.contains("- Which patients missed a dose?"));

    let gold = parse_turtle(&classes_ttl(&["Patient", "Tremor", "Gait", "Sensor"])).into_result().unwrap();
    engine.run_xhcome_step(&mut s, Some(HumanInput::AlignmentReview { gold, config: None })).unwrap();
    let r = s.alignment(EntityKind::Class).unwrap();
    assert_eq!((r.true_positives.len(), r.false_positives.len()), (2, 1));

    engine.run_xhcome_step(&mut s, None).unwrap();
    assert!(matches!(s.artifact("step-4"), Some(ArtifactValue::Advisory { .. })));

    let edits = parse_turtle(&classes_ttl(&["Gait"])).into_result().unwrap();
    engine.run_xhcome_step(&mut s, Some(HumanInput::Revision { ontology: edits })).unwrap();
    assert_eq!(s.final_ontology().unwrap().classes.len(), 4);
    let r = s.alignment(EntityKind::Class).unwrap();
    assert_eq!((r.true_positives.len(), r.false_positives.len()), (3, 1));

    engine.run_xhcome_step(&mut s, None).unwrap();
    engine.run_xhcome_step(&mut s, Some(HumanInput::Evaluation { notes: "fine".into() })).unwrap();
    assert_eq!(s.state, SessionState::Done);
    assert!(s.evaluation().unwrap().1.is_consistent());
    assert!(matches!(s.artifact(XHCOME_MERGED_STEP), Some(ArtifactValue::Ontology { .. })));
    assert_eq!(s.involvement_level, 4);
    assert!(matches!(engine.run_xhcome_step(&mut s, None), Err(WorkflowError::WrongState { .. })));

    let speakers: Vec<_> = s.transcript.turns.iter().map(|t| t.speaker == Speaker::Human).collect();
    assert_eq!(speakers, [true, false, true, false, true, false, true]);
}

fn simx_provider() -> ScriptedProvider {
    ScriptedProvider::with_responder(|_, prompt| {
        Ok(Completion::text(if prompt.contains("You are the KE") {
            fenced(&classes_ttl(&["Patient", "Tremor"]))
        } else {
            "Notes.".to_string()
        }))
    })
}

#[test]
fn simx_stop_after_first_round_keeps_one_artifact() {
    let clock = LogicalClock::default();
    let (gw, p) = gateway(simx_provider());
    let mut s = session(Methodology::SimXHcomePlus, &clock);
    Engine::new(&gw, &clock).run_simx(&mut s, |_, o| {
        assert!(o.is_some());
        Ok(Supervision::Stop)
    })
    .unwrap();
    assert_eq!(s.ontologies().count(), 1);
    assert_eq!(p.calls().len(), 3);
    assert_eq!(s.state, SessionState::Done);
    assert_eq!(s.involvement_level, 3);
    assert!(!s.has_flag(SessionFlag::CapReached));
}

#[test]
fn simx_continue_until_cap() {
    let clock = LogicalClock::default();
    let (gw, _) = gateway(simx_provider());
    let mut s = session(Methodology::SimXHcomePlus, &clock);
    let mut asked = 0;
    Engine::new(&gw, &clock)
        .run_simx(&mut s, |_, _| {
            asked += 1;
            Ok(Supervision::Continue)
        })
        .unwrap();
    assert_eq!(asked, 4);
    assert_eq!(s.ontologies().count(), 5);
    assert!(s.has_flag(SessionFlag::CapReached));
}

#[test]
fn simx_guidance_is_carried_into_the_next_round() {
    let clock = LogicalClock::default();
    let (gw, p) = gateway(simx_provider());
    let engine = Engine::new(&gw, &clock);
    let mut s = session(Methodology::SimXHcomePlus, &clock);
    engine.run_simx_round(&mut s).unwrap();
    assert_eq!(s.state, SessionState::SimxAwaitingSupervision { round: 1 });
    assert!(matches!(engine.run_simx_round(&mut s), Err(WorkflowError::WrongState { .. })));
    engine.apply_supervision(&mut s, Supervision::InjectGuidance("Model gait episodes.".into())).unwrap();
    engine.run_simx_round(&mut s).unwrap();
    let kw_round_2 = &p.calls()[3].1;
    assert!(kw_round_2.contains("Human: Model gait episodes."));
    assert!(kw_round_2.contains("KE: Here is the ontology"));
    // Context carries no timestamps.
    assert!(!kw_round_2.contains("2024-01-01"));
}

#[test]
fn simx_supervisor_error_keeps_the_session_paused() {
    let clock = LogicalClock::default();
    let (gw, _) = gateway(simx_provider());
    let mut s = session(Methodology::SimXHcomePlus, &clock);
    let err = Engine::new(&gw, &clock).run_simx(&mut s, |_, _| Err("reviewer left".into())).unwrap_err();
    assert!(matches!(err, WorkflowError::Supervisor(_)));
    assert_eq!(s.state, SessionState::SimxAwaitingSupervision { round: 1 });
}

#[test]
fn simx_failed_round_rolls_back() {
    let clock = LogicalClock::default();
    let (gw, p) = gateway(ScriptedProvider::default());
    p.push(Ok(Completion::text("kw")));
    p.push(Err(ProviderError::Fatal("x".into())));
    let mut s = session(Methodology::SimXHcomePlus, &clock);
    assert!(Engine::new(&gw, &clock).run_simx_round(&mut s).is_err());
    assert!(s.transcript.turns.is_empty());
    assert_eq!(s.state, SessionState::Start);
}

#[test]
fn nl2swrl_accepts_and_rejects() {
    let clock = LogicalClock::default();
    let (gw, p) = gateway(ScriptedProvider::new([
        "```\nObservation(?o) ^ hasAlert(?o, ?a)\n-> Alert(?a)\n```",
        "I cannot express this rule.",
    ]));
    let engine = Engine::new(&gw, &clock);
    let mut s = session(Methodology::OneShot, &clock);
    let rule = engine.nl2swrl(&mut s, "If observed then alert.").unwrap();
    assert_eq!(rule.accepted().unwrap().atom_count(), 3);
    assert!(p.calls()[0].1.ends_with("Rule: If observed then alert."));
    assert!(matches!(engine.nl2swrl(&mut s, "x").unwrap(), Generation::Rejected(_)));
    assert!(matches!(s.artifact(NL2SWRL_STEP), Some(ArtifactValue::RuleRejected { .. })));
}

#[test]
fn replayed_sessions_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("simx.jsonl");
    {
        let clock = LogicalClock::default();
        let gw = Gateway::isolated(Cassette::open(&path, CassetteMode::Record).unwrap());
        gw.register("llm", Box::new(simx_provider()));
        let mut s = session(Methodology::SimXHcomePlus, &clock);
        let mut n = 0;
        Engine::new(&gw, &clock)
            .run_simx(&mut s, |_, _| {
                n += 1;
                Ok(if n == 2 { Supervision::Stop } else { Supervision::InjectGuidance("more".into()) })
            })
            .unwrap();
    }
    let run = || {
        let clock = LogicalClock::default();
        let gw = Gateway::isolated(Cassette::open(&path, CassetteMode::Replay).unwrap());
        let mut s = session(Methodology::SimXHcomePlus, &clock);
        let mut n = 0;
        Engine::new(&gw, &clock)
            .run_simx(&mut s, |_, _| {
                n += 1;
                Ok(if n == 2 { Supervision::Stop } else { Supervision::InjectGuidance("more".into()) })
            })
            .unwrap();
        serde_json::to_string(&s).unwrap()
    };
    assert_eq!(run(), run());
}
