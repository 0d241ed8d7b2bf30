//! Persistent workflow sessions: state, transcript, artifacts and the human
//! involvement level.

use std::fmt;

use chrono::{DateTime, Utc};
use ontowb_core::align::{AlignmentConfig, AlignmentReport, ReviewDecision};
use ontowb_core::diagnostics::ParseDiagnostic;
use ontowb_core::lint::{Consistency, LintFinding};
use ontowb_core::ontology::{EntityKind, Ontology};
use ontowb_core::swrl::SwrlRule;
use serde::{Deserialize, Serialize};

use crate::clock::Clock;
use crate::prompts::{Bindings, PromptRole};

pub const SESSION_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_MAX_ROUNDS: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Methodology {
    #[serde(rename = "OS")]
    OneShot,
    #[serde(rename = "CoT")]
    ChainOfThought,
    #[serde(rename = "XHCOME")]
    XHcome,
    #[serde(rename = "SimXHCOMEPlus")]
    SimXHcomePlus,
}

impl Methodology {
    pub const ALL: [Methodology; 4] =
        [Methodology::OneShot, Methodology::ChainOfThought, Methodology::XHcome, Methodology::SimXHcomePlus];

    pub fn as_str(self) -> &'static str {
        match self {
            Methodology::OneShot => "OS",
            Methodology::ChainOfThought => "CoT",
            Methodology::XHcome => "XHCOME",
            Methodology::SimXHcomePlus => "SimXHCOMEPlus",
        }
    }
}

impl fmt::Display for Methodology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Human involvement on a 1 to 5 scale. Expert review only raises the level
/// of X-HCOME runs.
pub fn involvement_level(methodology: Methodology, expert_review_applied: bool) -> u8 {
    match methodology {
        Methodology::OneShot => 1,
        Methodology::ChainOfThought => 2,
        Methodology::SimXHcomePlus => 3,
        Methodology::XHcome if expert_review_applied => 5,
        Methodology::XHcome => 4,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Speaker {
    Human,
    #[serde(rename = "LLM")]
    Llm(PromptRole),
    System,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Turn {
    pub seq: u32,
    pub speaker: Speaker,
    pub prompt: String,
    pub response: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provider: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub timestamp: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_tokens: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_tokens: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Transcript {
    pub session_id: String,
    pub turns: Vec<Turn>,
}

impl Transcript {
    /// Appends a turn, assigning the next sequence number.
    pub fn push(&mut self, mut turn: Turn) -> u32 {
        turn.seq = self.turns.last().map_or(1, |t| t.seq + 1);
        let seq = turn.seq;
        self.turns.push(turn);
        seq
    }

    /// The conversation as plain text, without timestamps or metadata.
    pub fn render_context(&self) -> String {
        if self.turns.is_empty() {
            return "(none)".into();
        }
        let mut parts = Vec::new();
        for t in &self.turns {
            match t.speaker {
                Speaker::Llm(role) => parts.push(format!("{}: {}", role.abbreviation(), t.response.trim())),
                Speaker::Human => parts.push(format!("Human: {}", t.prompt.trim())),
                Speaker::System => {}
            }
        }
        parts.join("\n\n")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "type")]
pub enum ArtifactValue {
    Ontology { ontology: Ontology },
    /// The reply could not be parsed into an ontology.
    Rejected { diagnostics: Vec<ParseDiagnostic> },
    Rule { rule: SwrlRule },
    RuleRejected { diagnostics: Vec<ParseDiagnostic> },
    Alignment { report: AlignmentReport },
    /// Free-text LLM output kept for the human; never used for metrics.
    Advisory { text: String },
    Evaluation { lint: Vec<LintFinding>, consistency: Consistency },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Artifact {
    pub step: String,
    #[serde(flatten)]
    pub value: ArtifactValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "label")]
pub enum SessionState {
    Start,
    /// CoT prompt 1 answered; prompt 2 pending.
    CotPrompt2,
    /// Next X-HCOME step to run (1 to 7).
    XHcome { step: u8 },
    /// SimX-HCOME+ ready to run the given round.
    SimxRound { round: u32 },
    /// SimX-HCOME+ round finished; waiting for the supervisor.
    SimxAwaitingSupervision { round: u32 },
    Done,
}

impl fmt::Display for SessionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SessionState::Start => f.write_str("Start"),
            SessionState::CotPrompt2 => f.write_str("CotPrompt2"),
            SessionState::XHcome { step } => write!(f, "Step{step}"),
            SessionState::SimxRound { round } => write!(f, "Round{round}"),
            SessionState::SimxAwaitingSupervision { round } => write!(f, "AwaitingSupervision{round}"),
            SessionState::Done => f.write_str("Done"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SessionFlag {
    CapReached,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WorkflowSession {
    pub schema_version: u32,
    pub id: String,
    pub methodology: Methodology,
    pub provider: String,
    pub model: String,
    pub state: SessionState,
    pub bindings: Bindings,
    pub transcript: Transcript,
    pub artifacts: Vec<Artifact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pending_human_action: Option<String>,
    pub involvement_level: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold: Option<Ontology>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_rule: Option<SwrlRule>,
    #[serde(default)]
    pub alignment_config: AlignmentConfig,
    #[serde(default)]
    pub decisions: Vec<ReviewDecision>,
    #[serde(default)]
    pub flags: Vec<SessionFlag>,
    pub max_rounds: u32,
    /// Bumped on every mutation; used for optimistic concurrency.
    pub revision: u64,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

impl WorkflowSession {
    pub fn new(
        id: impl Into<String>,
        methodology: Methodology,
        provider: impl Into<String>,
        model: impl Into<String>,
        bindings: Bindings,
        clock: &dyn Clock,
    ) -> Self {
        let id = id.into();
        let now = clock.now();
        let state = match methodology {
            Methodology::XHcome => SessionState::XHcome { step: 1 },
            _ => SessionState::Start,
        };
        let mut s = Self {
            schema_version: SESSION_SCHEMA_VERSION,
            transcript: Transcript { session_id: id.clone(), turns: Vec::new() },
            id,
            methodology,
            provider: provider.into(),
            model: model.into(),
            state,
            bindings,
            artifacts: Vec::new(),
            pending_human_action: None,
            involvement_level: involvement_level(methodology, false),
            gold: None,
            gold_rule: None,
            alignment_config: AlignmentConfig::default(),
            decisions: Vec::new(),
            flags: Vec::new(),
            max_rounds: DEFAULT_MAX_ROUNDS,
            revision: 0,
            created_at: now,
            updated_at: now,
        };
        s.refresh_pending();
        s
    }

    pub fn expert_review_applied(&self) -> bool {
        self.methodology == Methodology::XHcome && !self.decisions.is_empty()
    }

    pub fn has_flag(&self, flag: SessionFlag) -> bool {
        self.flags.contains(&flag)
    }

    pub fn artifact(&self, step: &str) -> Option<&ArtifactValue> {
        self.artifacts.iter().rev().find(|a| a.step == step).map(|a| &a.value)
    }

    /// All ontology artifacts in order of creation.
    pub fn ontologies(&self) -> impl Iterator<Item = (&str, &Ontology)> {
        self.artifacts.iter().filter_map(|a| match &a.value {
            ArtifactValue::Ontology { ontology } => Some((a.step.as_str(), ontology)),
            _ => None,
        })
    }

    /// The ontology the run is evaluated on: for X-HCOME the merged revision,
    /// or the generated ontology before the merge; otherwise the most recent
    /// accepted ontology.
    pub fn final_ontology(&self) -> Option<&Ontology> {
        if self.methodology == Methodology::XHcome {
            use crate::workflow::{XHCOME_GENERATED_STEP, XHCOME_MERGED_STEP};
            return [XHCOME_MERGED_STEP, XHCOME_GENERATED_STEP].into_iter().find_map(|step| match self.artifact(step) {
                Some(ArtifactValue::Ontology { ontology }) => Some(ontology),
                _ => None,
            });
        }
        self.ontologies().last().map(|(_, o)| o)
    }

    pub fn alignment(&self, kind: EntityKind) -> Option<&AlignmentReport> {
        self.artifacts.iter().rev().find_map(|a| match &a.value {
            ArtifactValue::Alignment { report } if report.kind == kind => Some(report),
            _ => None,
        })
    }

    /// The latest NL to SWRL outcome: `Some(Some(rule))` when parsed,
    /// `Some(None)` when rejected, `None` when never attempted.
    pub fn rule_outcome(&self) -> Option<Option<&SwrlRule>> {
        self.artifacts.iter().rev().find_map(|a| match &a.value {
            ArtifactValue::Rule { rule } => Some(Some(rule)),
            ArtifactValue::RuleRejected { .. } => Some(None),
            _ => None,
        })
    }

    pub fn evaluation(&self) -> Option<(&[LintFinding], &Consistency)> {
        self.artifacts.iter().rev().find_map(|a| match &a.value {
            ArtifactValue::Evaluation { lint, consistency } => Some((lint.as_slice(), consistency)),
            _ => None,
        })
    }

    pub(crate) fn push_artifact(&mut self, step: impl Into<String>, value: ArtifactValue) {
        self.artifacts.push(Artifact { step: step.into(), value });
    }

    /// Records a completed mutation.
    pub fn touch(&mut self, clock: &dyn Clock) {
        self.revision += 1;
        self.updated_at = clock.now();
        self.involvement_level = involvement_level(self.methodology, self.expert_review_applied());
        self.refresh_pending();
    }

    fn refresh_pending(&mut self) {
        self.pending_human_action = match self.state {
            SessionState::XHcome { step: 1 } => Some("step 1: provide scope, aim, requirements and competency questions".into()),
            SessionState::XHcome { step: 3 } => Some("step 3: provide the gold ontology for alignment review".into()),
            SessionState::XHcome { step: 5 } => Some("step 5: provide the revised ontology".into()),
            SessionState::XHcome { step: 7 } => Some("step 7: evaluate the revised ontology".into()),
            SessionState::SimxAwaitingSupervision { round } => {
                Some(format!("round {round} finished: continue, stop or inject guidance"))
            }
            _ => None,
        };
    }
}
