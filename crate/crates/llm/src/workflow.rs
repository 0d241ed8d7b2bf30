//! Step machines for the OS, CoT, X-HCOME and SimX-HCOME+ methodologies, plus
//! natural-language to SWRL conversion.

use ontowb_core::align::{align, AlignmentConfig};
use ontowb_core::diagnostics::{ParseDiagnostic, ParseOutcome};
use ontowb_core::lint::{check_structural_consistency, lint};
use ontowb_core::ontology::{merge_ontologies, EntityKind, Ontology};
use ontowb_core::swrl::{extract_rule_from_response, parse_swrl, SwrlRule};
use ontowb_core::turtle::{extract_from_response, parse_turtle, serialize_turtle};
use serde::{Deserialize, Serialize};

use crate::clock::Clock;
use crate::error::WorkflowError;
use crate::gateway::Gateway;
use crate::prompts::{self, Bindings, PromptRole, PromptTemplate};
use crate::session::{ArtifactValue, Methodology, SessionFlag, SessionState, Speaker, Turn, WorkflowSession};

pub const OS_STEP: &str = "os";
pub const COT_STEP: &str = "cot";
pub const XHCOME_GENERATED_STEP: &str = "step-2";
pub const XHCOME_MERGED_STEP: &str = "step-5";
pub const NL2SWRL_STEP: &str = "nl2swrl";

/// Result of turning an LLM reply into an artifact.
#[derive(Debug, Clone, PartialEq)]
pub enum Generation<T> {
    Accepted(T),
    Rejected(Vec<ParseDiagnostic>),
}

impl<T> Generation<T> {
    pub fn accepted(&self) -> Option<&T> {
        match self {
            Generation::Accepted(v) => Some(v),
            Generation::Rejected(_) => None,
        }
    }
}

/// Input for the human steps of X-HCOME (1, 3, 5 and 7).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum HumanInput {
    Requirements { scope: String, aim: String, requirements: String, competency_questions: Vec<String> },
    AlignmentReview { gold: Ontology, config: Option<AlignmentConfig> },
    Revision { ontology: Ontology },
    Evaluation { notes: String },
}

impl HumanInput {
    fn expected_for(step: u8) -> &'static str {
        match step {
            1 => "requirements",
            3 => "alignmentReview",
            5 => "revision",
            _ => "evaluation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", content = "text")]
pub enum Supervision {
    Continue,
    Stop,
    InjectGuidance(String),
}

/// Parses the Turtle inside a free-form reply; replies without a recognizable
/// Turtle block are parsed whole so the diagnostics point somewhere.
pub fn parse_reply(reply: &str) -> ParseOutcome<Ontology> {
    let ttl = extract_from_response(reply).unwrap_or_else(|| reply.to_string());
    parse_turtle(&ttl)
}

pub fn parse_rule_reply(reply: &str) -> ParseOutcome<SwrlRule> {
    let text = extract_rule_from_response(reply).unwrap_or_else(|| reply.trim().to_string());
    parse_swrl(&text)
}

fn wrong_state(s: &WorkflowSession, operation: &str) -> WorkflowError {
    WorkflowError::WrongState { state: s.state.to_string(), operation: operation.into() }
}

fn require(s: &WorkflowSession, m: Methodology, operation: &str) -> Result<(), WorkflowError> {
    if s.methodology == m {
        Ok(())
    } else {
        Err(WorkflowError::WrongMethodology { actual: s.methodology.to_string(), operation: operation.into() })
    }
}

fn bindings_with(s: &WorkflowSession, extra: &[(&str, String)]) -> Bindings {
    let mut b = s.bindings.clone();
    for (k, v) in extra {
        b.insert((*k).to_string(), v.clone());
    }
    b
}

/// Runs workflows against a gateway, stamping turns with `clock`.
pub struct Engine<'a> {
    pub gateway: &'a Gateway,
    pub clock: &'a dyn Clock,
}

impl<'a> Engine<'a> {
    pub fn new(gateway: &'a Gateway, clock: &'a dyn Clock) -> Self {
        Self { gateway, clock }
    }

    fn ask(&self, s: &mut WorkflowSession, role: PromptRole, prompt: String) -> Result<String, WorkflowError> {
        let c = self.gateway.complete_full(&s.provider, &s.model, &prompt)?;
        s.transcript.push(Turn {
            seq: 0,
            speaker: Speaker::Llm(role),
            prompt,
            response: c.text.clone(),
            provider: Some(s.provider.clone()),
            model: Some(s.model.clone()),
            timestamp: self.clock.now(),
            input_tokens: c.input_tokens,
            output_tokens: c.output_tokens,
        });
        Ok(c.text)
    }

    fn human_turn(&self, s: &mut WorkflowSession, text: String) {
        s.transcript.push(Turn {
            seq: 0,
            speaker: Speaker::Human,
            prompt: text,
            response: String::new(),
            provider: None,
            model: None,
            timestamp: self.clock.now(),
            input_tokens: None,
            output_tokens: None,
        });
    }

    fn store_ontology(&self, s: &mut WorkflowSession, step: &str, reply: &str) -> Generation<Ontology> {
        match parse_reply(reply).into_result() {
            Ok(o) => {
                s.push_artifact(step, ArtifactValue::Ontology { ontology: o.clone() });
                Generation::Accepted(o)
            }
            Err(diagnostics) => {
                tracing::warn!(session = %s.id, step, "reply rejected by the Turtle parser");
                s.push_artifact(step, ArtifactValue::Rejected { diagnostics: diagnostics.clone() });
                Generation::Rejected(diagnostics)
            }
        }
    }

    /// One prompt with the aim, scope and requirements; the reply is parsed.
    pub fn run_os(&self, s: &mut WorkflowSession) -> Result<Generation<Ontology>, WorkflowError> {
        require(s, Methodology::OneShot, "runOS")?;
        if s.state != SessionState::Start {
            return Err(wrong_state(s, "runOS"));
        }
        let prompt = prompts::ONE_SHOT.render(&s.bindings)?;
        let reply = self.ask(s, PromptRole::OntologyEngineer, prompt)?;
        let out = self.store_ontology(s, OS_STEP, &reply);
        s.state = SessionState::Done;
        s.touch(self.clock);
        Ok(out)
    }

    /// Two prompts; the second carries the first exchange as context. A
    /// failure of the second prompt leaves the session at `CotPrompt2`.
    pub fn run_cot(&self, s: &mut WorkflowSession) -> Result<Generation<Ontology>, WorkflowError> {
        require(s, Methodology::ChainOfThought, "runCoT")?;
        if s.state == SessionState::Start {
            let p1 = prompts::COT_PROMPT_1.render(&s.bindings)?;
            self.ask(s, PromptRole::OntologyEngineer, p1)?;
            s.state = SessionState::CotPrompt2;
            s.touch(self.clock);
        }
        if s.state != SessionState::CotPrompt2 {
            return Err(wrong_state(s, "runCoT"));
        }
        let first = s.transcript.turns.last().ok_or(WorkflowError::MissingArtifact("CoT prompt 1 reply"))?;
        let context = format!("{}\n\n{}", first.prompt, first.response);
        let p2 = prompts::COT_PROMPT_2.render(&s.bindings)?;
        let reply = self.ask(s, PromptRole::OntologyEngineer, format!("{context}\n\n{p2}"))?;
        let out = self.store_ontology(s, COT_STEP, &reply);
        s.state = SessionState::Done;
        s.touch(self.clock);
        Ok(out)
    }

    fn generated(s: &WorkflowSession) -> Ontology {
        match s.artifact(XHCOME_GENERATED_STEP) {
            Some(ArtifactValue::Ontology { ontology }) => ontology.clone(),
            _ => Ontology::empty(),
        }
    }

    fn merged(s: &WorkflowSession) -> Result<Ontology, WorkflowError> {
        s.final_ontology().cloned().ok_or(WorkflowError::MissingArtifact("merged ontology"))
    }

    fn record_alignments(s: &mut WorkflowSession, step: u8, generated: &Ontology) -> Result<(), WorkflowError> {
        let gold = s.gold.clone().ok_or(WorkflowError::MissingArtifact("gold ontology"))?;
        for kind in EntityKind::ALL {
            let report = align(generated, &gold, kind, &s.alignment_config);
            s.push_artifact(format!("step-{step}-{}", kind.as_str()), ArtifactValue::Alignment { report });
        }
        Ok(())
    }

    /// Advances an X-HCOME session by exactly one step. Steps 1, 3, 5 and 7
    /// require human input; steps 2, 4 and 6 reject it.
    pub fn run_xhcome_step(&self, s: &mut WorkflowSession, input: Option<HumanInput>) -> Result<(), WorkflowError> {
        require(s, Methodology::XHcome, "runXHCOMEStep")?;
        let SessionState::XHcome { step } = s.state else {
            return Err(wrong_state(s, "runXHCOMEStep"));
        };
        let human = step % 2 == 1;
        let input = match (human, input) {
            (true, None) => return Err(WorkflowError::HumanInputRequired(step)),
            (false, Some(_)) => return Err(WorkflowError::UnexpectedHumanInput(step)),
            (_, input) => input,
        };
        let wrong = || WorkflowError::WrongHumanInput { step, expected: HumanInput::expected_for(step) };
        match (step, input) {
            (1, Some(HumanInput::Requirements { scope, aim, requirements, competency_questions })) => {
                let cqs = competency_questions.iter().map(|q| format!("- {q}")).collect::<Vec<_>>().join("\n");
                self.human_turn(s, format!("Scope: {scope}\nAim: {aim}\nRequirements: {requirements}\nCompetency questions:\n{cqs}"));
                s.bindings.insert("scope".into(), scope);
                s.bindings.insert("aim".into(), aim);
                s.bindings.insert("requirements".into(), requirements);
                s.bindings.insert("competencyQuestions".into(), cqs);
            }
            (2, None) => {
                let prompt = prompts::XHCOME_GENERATE.render(&s.bindings)?;
                let reply = self.ask(s, PromptRole::OntologyEngineer, prompt)?;
                self.store_ontology(s, XHCOME_GENERATED_STEP, &reply);
            }
            (3, Some(HumanInput::AlignmentReview { gold, config })) => {
                if let Some(c) = config {
                    c.validate()?;
                    s.alignment_config = c;
                }
                self.human_turn(s, format!("Alignment review against a gold ontology with {} classes", gold.classes.len()));
                s.gold = Some(gold);
                let generated = Self::generated(s);
                Self::record_alignments(s, 3, &generated)?;
            }
            (4, None) | (6, None) => {
                let (template, target): (PromptTemplate, Ontology) = if step == 4 {
                    (prompts::XHCOME_COMPARE, Self::generated(s))
                } else {
                    (prompts::XHCOME_REEVALUATE, Self::merged(s)?)
                };
                let gold = s.gold.as_ref().ok_or(WorkflowError::MissingArtifact("gold ontology"))?;
                let b = bindings_with(s, &[("priorOutput", serialize_turtle(&target)), ("gold", serialize_turtle(gold))]);
                let prompt = template.render(&b)?;
                let reply = self.ask(s, PromptRole::OntologyEngineer, prompt)?;
                s.push_artifact(format!("step-{step}"), ArtifactValue::Advisory { text: reply });
            }
            (5, Some(HumanInput::Revision { ontology })) => {
                let merged = merge_ontologies(&ontology, &Self::generated(s))?;
                self.human_turn(s, format!("Revised ontology with {} classes", ontology.classes.len()));
                s.push_artifact(XHCOME_MERGED_STEP, ArtifactValue::Ontology { ontology: merged.clone() });
                Self::record_alignments(s, 5, &merged)?;
            }
            (7, Some(HumanInput::Evaluation { notes })) => {
                let merged = Self::merged(s)?;
                self.human_turn(s, format!("Evaluation: {notes}"));
                s.push_artifact(
                    "step-7",
                    ArtifactValue::Evaluation { lint: lint(&merged), consistency: check_structural_consistency(&merged) },
                );
            }
            _ => return Err(wrong()),
        }
        s.state = if step == 7 { SessionState::Done } else { SessionState::XHcome { step: step + 1 } };
        s.touch(self.clock);
        Ok(())
    }

    /// Runs one KW, DE, KE round and stores the KE ontology. A failed call
    /// rolls the round back so it can be retried.
    pub fn run_simx_round(&self, s: &mut WorkflowSession) -> Result<Generation<Ontology>, WorkflowError> {
        require(s, Methodology::SimXHcomePlus, "runSimXRound")?;
        let round = match s.state {
            SessionState::Start => 1,
            SessionState::SimxRound { round } => round,
            _ => return Err(wrong_state(s, "runSimXRound")),
        };
        let turns_before = s.transcript.turns.len();
        let result = self.simx_exchange(s);
        let reply = match result {
            Ok(r) => r,
            Err(e) => {
                s.transcript.turns.truncate(turns_before);
                return Err(e);
            }
        };
        let out = self.store_ontology(s, &format!("round-{round}"), &reply);
        if round >= s.max_rounds {
            s.state = SessionState::Done;
            s.flags.push(SessionFlag::CapReached);
        } else {
            s.state = SessionState::SimxAwaitingSupervision { round };
        }
        s.touch(self.clock);
        Ok(out)
    }

    fn simx_exchange(&self, s: &mut WorkflowSession) -> Result<String, WorkflowError> {
        let mut reply = String::new();
        for template in [prompts::SIMX_KNOWLEDGE_WORKER, prompts::SIMX_DOMAIN_EXPERT, prompts::SIMX_KNOWLEDGE_ENGINEER] {
            let mut b = bindings_with(s, &[("priorOutput", s.transcript.render_context())]);
            b.entry("competencyQuestions".into()).or_insert_with(|| "(none)".into());
            let prompt = template.render(&b)?;
            reply = self.ask(s, template.role, prompt)?;
        }
        Ok(reply)
    }

    pub fn apply_supervision(&self, s: &mut WorkflowSession, decision: Supervision) -> Result<(), WorkflowError> {
        require(s, Methodology::SimXHcomePlus, "supervise")?;
        let SessionState::SimxAwaitingSupervision { round } = s.state else {
            return Err(wrong_state(s, "supervise"));
        };
        s.state = match decision {
            Supervision::Stop => SessionState::Done,
            Supervision::Continue => SessionState::SimxRound { round: round + 1 },
            Supervision::InjectGuidance(text) => {
                self.human_turn(s, text);
                SessionState::SimxRound { round: round + 1 }
            }
        };
        s.touch(self.clock);
        Ok(())
    }

    /// Runs rounds until the supervisor stops or the round cap is reached.
    /// The supervisor sees the session and the round's ontology (if the
    /// reply parsed). A supervisor error aborts with the session paused.
    pub fn run_simx<F>(&self, s: &mut WorkflowSession, mut supervisor: F) -> Result<(), WorkflowError>
    where
        F: FnMut(&WorkflowSession, Option<&Ontology>) -> Result<Supervision, String>,
    {
        loop {
            let latest = if let SessionState::SimxAwaitingSupervision { .. } = s.state {
                s.ontologies().last().map(|(_, o)| o.clone())
            } else {
                let out = self.run_simx_round(s)?;
                if s.state == SessionState::Done {
                    return Ok(());
                }
                out.accepted().cloned()
            };
            let decision = supervisor(s, latest.as_ref()).map_err(WorkflowError::Supervisor)?;
            self.apply_supervision(s, decision)?;
            if s.state == SessionState::Done {
                return Ok(());
            }
        }
    }

    /// Asks for a SWRL version of `nl_rule` and stores the parsed rule or the
    /// rejection diagnostics.
    pub fn nl2swrl(&self, s: &mut WorkflowSession, nl_rule: &str) -> Result<Generation<SwrlRule>, WorkflowError> {
        let b = bindings_with(s, &[("nlRule", nl_rule.to_string())]);
        let prompt = prompts::NL_TO_SWRL.render(&b)?;
        let reply = self.ask(s, PromptRole::KnowledgeEngineer, prompt)?;
        let out = match parse_rule_reply(&reply).into_result() {
            Ok(rule) => {
                s.push_artifact(NL2SWRL_STEP, ArtifactValue::Rule { rule: rule.clone() });
                Generation::Accepted(rule)
            }
            Err(diagnostics) => {
                s.push_artifact(NL2SWRL_STEP, ArtifactValue::RuleRejected { diagnostics: diagnostics.clone() });
                Generation::Rejected(diagnostics)
            }
        };
        s.touch(self.clock);
        Ok(out)
    }
}
