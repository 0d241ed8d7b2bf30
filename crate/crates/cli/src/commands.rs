//! `ontowb` subcommands. Exit codes: 0 success, 1 validation failure,
//! 2 parse or provider error, 64 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ontowb_core::align::{align, apply_review, AlignmentConfig, AlignmentReport, ReviewDecision, SimilarityMeasure};
use ontowb_core::diagnostics::ParseDiagnostic;
use ontowb_core::lint::{check_structural_consistency, lint, Consistency, LintSeverity};
use ontowb_core::ontology::{EntityKind, Ontology};
use ontowb_core::swrl::{compare_rules, RuleComparison, SwrlRule};
use ontowb_core::turtle::{parse_turtle_bytes, serialize_turtle};
use ontowb_core::ReviewError;
use ontowb_llm::clock::LOGICAL_EPOCH;
use ontowb_llm::prompts::pd_bindings;
use ontowb_llm::session::ArtifactValue;
use ontowb_llm::workflow::parse_rule_reply;
use ontowb_llm::{
    Cassette, CassetteMode, Clock, Engine, Gateway, LogicalClock, Methodology, SessionState, Supervision,
    SystemClock, WorkflowError, WorkflowSession,
};
use serde_json::json;

use crate::api::{self, AppState, DecisionInput};
use crate::config::Config;
use crate::inputs::Script;
use crate::report::{self, AlignmentSummary, MetricsSummary, RuleSummary, REPORT_SCHEMA_VERSION};
use crate::store::{valid_id, SessionStore, StoreError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "ontowb", version, about = "Ontology generation, evaluation and review workbench")]
pub struct Cli {
    /// TOML configuration with the alignment threshold and provider endpoints.
    #[arg(long, global = true, env = "ONTOWB_CONFIG")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a generation methodology and store the session.
    Generate(GenerateArgs),
    /// Align a generated ontology with a gold ontology.
    Evaluate(EvaluateArgs),
    /// Apply expert review decisions to an alignment.
    Review(ReviewArgs),
    /// Structural lint and consistency check.
    Lint(LintArgs),
    /// Parse a SWRL rule and optionally compare it with a gold rule.
    SwrlCheck(SwrlCheckArgs),
    /// Render the report of a stored session.
    Report(ReportArgs),
    /// Serve the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Os,
    Cot,
    Xhcome,
    Simxhcome,
}

impl From<MethodArg> for Methodology {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Os => Methodology::OneShot,
            MethodArg::Cot => Methodology::ChainOfThought,
            MethodArg::Xhcome => Methodology::XHcome,
            MethodArg::Simxhcome => Methodology::SimXHcomePlus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Class,
    Objprop,
}

impl From<KindArg> for EntityKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Class => EntityKind::Class,
            KindArg::Objprop => EntityKind::ObjectProperty,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Jaccard,
    Levenshtein,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[arg(long)]
    pub provider: String,
    #[arg(long)]
    pub model: String,
    /// JSON-Lines cassette; recorded to unless --replay is given.
    #[arg(long)]
    pub cassette: Option<PathBuf>,
    /// Serve every request from the cassette.
    #[arg(long, requires = "cassette")]
    pub replay: bool,
    /// Scripted human inputs and supervision decisions.
    #[arg(long)]
    pub script: Option<PathBuf>,
    /// Gold ontology used for the report.
    #[arg(long)]
    pub gold: Option<PathBuf>,
    /// Gold SWRL rule; defaults to the first rule embedded in the gold ontology.
    #[arg(long)]
    pub gold_rule: Option<PathBuf>,
    /// Natural-language rule to convert to SWRL after generation.
    #[arg(long, conflicts_with = "nl_rule_file")]
    pub nl_rule: Option<String>,
    #[arg(long)]
    pub nl_rule_file: Option<PathBuf>,
    #[arg(long, default_value = "sessions")]
    pub sessions: PathBuf,
    #[arg(long)]
    pub session_id: Option<String>,
    /// Directory for `<session>.ttl` and `<session>.report.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub max_rounds: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub generated: PathBuf,
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long, value_enum, default_value = "class")]
    pub kind: KindArg,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, value_enum)]
    pub measure: Option<MeasureArg>,
    /// Skip the similarity phase.
    #[arg(long)]
    pub exact_only: bool,
}

#[derive(Debug, Args)]
pub struct ReviewArgs {
    /// Output of `evaluate` (or a bare alignment report).
    #[arg(long)]
    pub report: PathBuf,
    /// JSON list of decisions.
    #[arg(long)]
    pub decisions: PathBuf,
}

#[derive(Debug, Args)]
pub struct LintArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "markdown")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct SwrlCheckArgs {
    /// Candidate rule, or an LLM reply containing one.
    #[arg(long)]
    pub candidate: PathBuf,
    /// Gold rule to compare against.
    #[arg(long)]
    pub gold: Option<PathBuf>,
    #[arg(long)]
    pub theta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub session: String,
    #[arg(long, default_value = "sessions")]
    pub sessions: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: std::net::IpAddr,
    #[arg(long, default_value = "sessions")]
    pub sessions: PathBuf,
    /// Gold ontology listed by `/gold/entities`.
    #[arg(long)]
    pub gold: Option<PathBuf>,
    #[arg(long)]
    pub cassette: Option<PathBuf>,
    #[arg(long, requires = "cassette")]
    pub replay: bool,
}

/// A failed command: message for stderr and the exit code.
#[derive(Debug)]
pub struct CmdError {
    pub code: i32,
    pub message: String,
}

impl CmdError {
    fn usage(m: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: m.into() }
    }
    fn validation(m: impl Into<String>) -> Self {
        Self { code: EXIT_VALIDATION, message: m.into() }
    }
    fn failure(m: impl Into<String>) -> Self {
        Self { code: EXIT_FAILURE, message: m.into() }
    }
}

impl From<StoreError> for CmdError {
    fn from(e: StoreError) -> Self {
        CmdError::failure(e.to_string())
    }
}

impl From<WorkflowError> for CmdError {
    fn from(e: WorkflowError) -> Self {
        match e {
            WorkflowError::Llm(_) | WorkflowError::Template(_) => CmdError::failure(e.to_string()),
            _ => CmdError::validation(e.to_string()),
        }
    }
}

type CmdResult = Result<i32, CmdError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let config = match &cli.config {
        Some(p) => Config::load(p).map_err(|e| CmdError::usage(format!("{}: {e}", p.display())))?,
        None => Config::default(),
    };
    match cli.command {
        Command::Generate(a) => generate(&config, a, out, err),
        Command::Evaluate(a) => evaluate(&config, a, out, err),
        Command::Review(a) => review(a, out),
        Command::Lint(a) => lint_cmd(a, out, err),
        Command::SwrlCheck(a) => swrl_check(&config, a, out, err),
        Command::Report(a) => report_cmd(a, out),
        Command::Serve(a) => serve(&config, a),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CmdError> {
    out.write_all(text.as_bytes())
        .and_then(|_| if text.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") })
        .map_err(|e| CmdError::failure(e.to_string()))
}

fn read(path: &Path) -> Result<Vec<u8>, CmdError> {
    std::fs::read(path).map_err(|e| CmdError::failure(format!("{}: {e}", path.display())))
}

fn report_diagnostics(err: &mut dyn Write, file: &Path, diagnostics: &[ParseDiagnostic]) {
    for d in diagnostics {
        let _ = writeln!(err, "{}", d.render(&file.display().to_string()));
    }
}

/// Parses a Turtle file; errors print diagnostics and exit 2.
fn load_ontology(path: &Path, err: &mut dyn Write) -> Result<Ontology, CmdError> {
    let outcome = parse_turtle_bytes(&read(path)?);
    report_diagnostics(err, path, &outcome.diagnostics);
    outcome.into_result().map_err(|_| CmdError::failure(format!("{}: not valid Turtle", path.display())))
}

fn load_rule(path: &Path, err: &mut dyn Write) -> Result<Result<SwrlRule, Vec<ParseDiagnostic>>, CmdError> {
    let text = String::from_utf8(read(path)?).map_err(|e| CmdError::failure(format!("{}: {e}", path.display())))?;
    let outcome = parse_rule_reply(&text);
    report_diagnostics(err, path, &outcome.diagnostics);
    Ok(outcome.into_result())
}

fn gateway(config: &Config, cassette: Option<&Path>, replay: bool) -> Result<Gateway, CmdError> {
    let mode = match (cassette, replay) {
        (Some(_), true) => CassetteMode::Replay,
        (Some(_), false) => CassetteMode::Record,
        (None, _) => CassetteMode::Passthrough,
    };
    let cassette = match cassette {
        Some(p) => Cassette::open(p, mode).map_err(|e| CmdError::failure(e.to_string()))?,
        None => Cassette::in_memory(mode),
    };
    let gw = Gateway::new(cassette);
    config.register_providers(&gw).map_err(|e| CmdError::failure(e.to_string()))?;
    Ok(gw)
}

fn default_session_id(method: Methodology, provider: &str, model: &str, clock: &dyn Clock, replay: bool) -> String {
    let raw = format!("{}-{provider}-{model}", method.as_str().to_ascii_lowercase());
    let mut id: String =
        raw.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '-' }).collect();
    if !replay {
        id.push_str(&clock.now().format("-%Y%m%dT%H%M%SZ").to_string());
    }
    id
}

fn rejected_steps(s: &WorkflowSession) -> Vec<&str> {
    s.artifacts
        .iter()
        .filter(|a| matches!(a.value, ArtifactValue::Rejected { .. } | ArtifactValue::RuleRejected { .. }))
        .map(|a| a.step.as_str())
        .collect()
}

fn generate(config: &Config, a: GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let methodology = Methodology::from(a.method);
    let script: Script = match &a.script {
        Some(p) => serde_json::from_slice(&read(p)?).map_err(|e| CmdError::usage(format!("{}: {e}", p.display())))?,
        None => Script::default(),
    };
    let script_dir = a.script.as_deref().and_then(Path::parent).map(Path::to_path_buf).unwrap_or_default();
    let alignment = config.alignment_config(a.theta).map_err(|e| CmdError::usage(e.to_string()))?;
    let gold = a.gold.as_deref().map(|p| load_ontology(p, err)).transpose()?;
    let gold_rule = match &a.gold_rule {
        Some(p) => Some(load_rule(p, err)?.map_err(|_| CmdError::failure(format!("{}: invalid gold rule", p.display())))?),
        None => gold.as_ref().and_then(|g| g.rules.first().cloned()),
    };
    let nl_rule = match (&a.nl_rule, &a.nl_rule_file) {
        (Some(t), _) => Some(t.clone()),
        (None, Some(p)) => Some(String::from_utf8_lossy(&read(p)?).trim().to_string()),
        (None, None) => None,
    };

    let gw = gateway(config, a.cassette.as_deref(), a.replay)?;
    let clock: Box<dyn Clock> = if a.replay { Box::new(LogicalClock::default()) } else { Box::new(SystemClock) };
    let id = match a.session_id {
        Some(id) => id,
        None => default_session_id(methodology, &a.provider, &a.model, clock.as_ref(), a.replay),
    };
    if !valid_id(&id) {
        return Err(CmdError::usage(format!("invalid session id {id:?}")));
    }
    let store = SessionStore::new(&a.sessions);
    let mut s = WorkflowSession::new(&id, methodology, &a.provider, &a.model, pd_bindings(), clock.as_ref());
    s.alignment_config = alignment;
    s.gold = gold;
    s.gold_rule = gold_rule;
    if let Some(n) = a.max_rounds {
        s.max_rounds = n.max(1);
    }

    let engine = Engine::new(&gw, clock.as_ref());
    let result = drive(&engine, &mut s, script, &script_dir).and_then(|()| match &nl_rule {
        Some(rule) => engine.nl2swrl(&mut s, rule).map(|_| ()).map_err(CmdError::from),
        None => Ok(()),
    });
    store.save(&s)?;
    result?;

    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).map_err(|e| CmdError::failure(format!("{}: {e}", dir.display())))?;
        if let Some(o) = s.final_ontology() {
            std::fs::write(dir.join(format!("{id}.ttl")), serialize_turtle(o))
                .map_err(|e| CmdError::failure(e.to_string()))?;
        }
    }
    if s.gold.is_some() {
        let r = report::build_report(&s).map_err(|e| CmdError::validation(e.to_string()))?;
        if let Some(dir) = &a.out {
            std::fs::write(dir.join(format!("{id}.report.json")), report::render_json(&r) + "\n")
                .map_err(|e| CmdError::failure(e.to_string()))?;
        }
        emit(out, &match a.format {
            FormatArg::Json => report::render_json(&r),
            FormatArg::Markdown => report::render_markdown(&r),
        })?;
    } else {
        let summary = crate::store::SessionSummary::from(&s);
        emit(out, &serde_json::to_string_pretty(&json!({ "schemaVersion": REPORT_SCHEMA_VERSION, "session": summary })).unwrap())?;
    }
    let rejected = rejected_steps(&s);
    if !rejected.is_empty() {
        let _ = writeln!(err, "error: reply rejected by the parser at step(s) {}", rejected.join(", "));
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

/// Runs the methodology to completion, taking human input from `script`.
pub fn drive(engine: &Engine<'_>, s: &mut WorkflowSession, script: Script, base: &Path) -> Result<(), CmdError> {
    match s.methodology {
        Methodology::OneShot => engine.run_os(s).map(|_| ())?,
        Methodology::ChainOfThought => engine.run_cot(s).map(|_| ())?,
        Methodology::XHcome => {
            let mut inputs = script.human_inputs.into_iter();
            while let SessionState::XHcome { step } = s.state {
                let input = if step % 2 == 1 {
                    let spec = inputs
                        .next()
                        .ok_or_else(|| CmdError::usage(format!("script has no human input for X-HCOME step {step}")))?;
                    Some(spec.resolve(Some(base)).map_err(|e| CmdError::failure(e.to_string()))?)
                } else {
                    None
                };
                engine.run_xhcome_step(s, input)?;
            }
        }
        Methodology::SimXHcomePlus => {
            let mut decisions = script.supervision.into_iter();
            engine.run_simx(s, |_, _| Ok(decisions.next().unwrap_or(Supervision::Continue)))?;
        }
    }
    Ok(())
}

fn evaluate(config: &Config, a: EvaluateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let mut cfg = config.alignment_config(a.theta).map_err(|e| CmdError::usage(e.to_string()))?;
    if let Some(m) = a.measure {
        cfg.similarity_measure = match m {
            MeasureArg::Jaccard => SimilarityMeasure::TokenJaccard,
            MeasureArg::Levenshtein => SimilarityMeasure::NormalizedLevenshtein,
        };
    }
    if a.exact_only {
        cfg = AlignmentConfig { mode: ontowb_core::align::AlignMode::ExactOnly, ..cfg };
    }
    let generated = load_ontology(&a.generated, err)?;
    let gold = load_ontology(&a.gold, err)?;
    let report = align(&generated, &gold, a.kind.into(), &cfg);
    let summary = AlignmentSummary::new(report).map_err(|e| CmdError::validation(e.to_string()))?;
    emit(out, &serde_json::to_string_pretty(&summary).unwrap())?;
    Ok(EXIT_OK)
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum ReportInput {
    Summary(AlignmentSummary),
    Bare(AlignmentReport),
}

fn review(a: ReviewArgs, out: &mut dyn Write) -> CmdResult {
    let report = match serde_json::from_slice::<ReportInput>(&read(&a.report)?) {
        Ok(ReportInput::Summary(s)) => s.report,
        Ok(ReportInput::Bare(r)) => r,
        Err(e) => return Err(CmdError::failure(format!("{}: {e}", a.report.display()))),
    };
    let inputs: Vec<DecisionInput> = serde_json::from_slice(&read(&a.decisions)?)
        .map_err(|e| CmdError::failure(format!("{}: {e}", a.decisions.display())))?;
    let epoch = chrono::DateTime::from_timestamp(LOGICAL_EPOCH, 0).expect("valid epoch");
    let decisions: Vec<ReviewDecision> = inputs
        .into_iter()
        .map(|d| ReviewDecision {
            generated_iri: d.generated_iri,
            verdict: d.verdict,
            rationale: d.rationale,
            reviewer: d.reviewer,
            timestamp: d.timestamp.unwrap_or(epoch),
        })
        .collect();
    let outcome = match apply_review(&report, &decisions) {
        Ok(o) => o,
        Err(e @ ReviewError::NotAFalsePositive(_)) => return Err(CmdError::validation(e.to_string())),
        Err(e) => return Err(CmdError::failure(e.to_string())),
    };
    let body = json!({
        "schemaVersion": REPORT_SCHEMA_VERSION,
        "kind": outcome.report.kind,
        "before": MetricsSummary::from(outcome.before),
        "after": MetricsSummary::from(outcome.after),
        "report": outcome.report,
    });
    emit(out, &serde_json::to_string_pretty(&body).unwrap())?;
    Ok(EXIT_OK)
}

fn lint_cmd(a: LintArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let o = load_ontology(&a.file, err)?;
    let findings = lint(&o);
    let consistency = check_structural_consistency(&o);
    match a.format {
        FormatArg::Json => emit(
            out,
            &serde_json::to_string_pretty(&json!({
                "schemaVersion": REPORT_SCHEMA_VERSION,
                "findings": findings,
                "consistency": consistency,
            }))
            .unwrap(),
        )?,
        FormatArg::Markdown => {
            let mut text = String::new();
            for f in &findings {
                text.push_str(&format!("{f}\n"));
            }
            text.push_str(&match &consistency {
                Consistency::Consistent => "consistent\n".to_string(),
                Consistency::Inconsistent(c) => {
                    format!("inconsistent: {}\n", c.iter().map(|i| format!("<{i}>")).collect::<Vec<_>>().join(" -> "))
                }
            });
            emit(out, &text)?;
        }
    }
    let worst = findings.iter().map(|f| f.severity).max();
    Ok(if !consistency.is_consistent() || worst == Some(LintSeverity::Critical) {
        EXIT_FAILURE
    } else if worst == Some(LintSeverity::Important) {
        EXIT_VALIDATION
    } else {
        EXIT_OK
    })
}

fn swrl_check(config: &Config, a: SwrlCheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let candidate = load_rule(&a.candidate, err)?;
    let Some(gold_path) = &a.gold else {
        return match candidate {
            Ok(rule) => {
                emit(out, &rule.to_string())?;
                Ok(EXIT_OK)
            }
            Err(_) => Ok(EXIT_FAILURE),
        };
    };
    let gold = load_rule(gold_path, err)?.map_err(|_| CmdError::failure(format!("{}: invalid gold rule", gold_path.display())))?;
    let cfg = config.alignment_config(a.theta).map_err(|e| CmdError::usage(e.to_string()))?;
    // Only the threshold and measure of this report are consulted.
    let carrier = AlignmentReport {
        kind: EntityKind::Class,
        pairs: Vec::new(),
        true_positives: Default::default(),
        false_positives: Default::default(),
        false_negatives: Default::default(),
        config: cfg,
        gold_count: 0,
    };
    let comparison = match &candidate {
        Ok(rule) => compare_rules(rule, &gold, Some(&carrier)),
        Err(_) => RuleComparison::rejected(),
    };
    let summary = RuleSummary::new(comparison);
    emit(
        out,
        &serde_json::to_string_pretty(&json!({
            "schemaVersion": REPORT_SCHEMA_VERSION,
            "candidateAtoms": candidate.as_ref().map(|r| r.atom_count()).unwrap_or(0),
            "goldAtoms": gold.atom_count(),
            "comparison": summary.comparison,
            "metrics": summary.metrics,
        }))
        .unwrap(),
    )?;
    Ok(if candidate.is_ok() { EXIT_OK } else { EXIT_FAILURE })
}

fn report_cmd(a: ReportArgs, out: &mut dyn Write) -> CmdResult {
    let s = SessionStore::new(&a.sessions).load(&a.session)?;
    let r = report::build_report(&s).map_err(|e| CmdError::validation(e.to_string()))?;
    emit(out, &match a.format {
        FormatArg::Json => report::render_json(&r),
        FormatArg::Markdown => report::render_markdown(&r),
    })?;
    Ok(EXIT_OK)
}

fn serve(config: &Config, a: ServeArgs) -> CmdResult {
    let mut sink = std::io::sink();
    let gold = a.gold.as_deref().map(|p| load_ontology(p, &mut sink)).transpose()?;
    let gw = Arc::new(gateway(config, a.cassette.as_deref(), a.replay)?);
    let clock: Arc<dyn Clock> = if a.replay { Arc::new(LogicalClock::default()) } else { Arc::new(SystemClock) };
    let state = Arc::new(AppState::new(SessionStore::new(&a.sessions), gold, gw, clock));
    let rt = tokio::runtime::Runtime::new().map_err(|e| CmdError::failure(e.to_string()))?;
    rt.block_on(api::serve(std::net::SocketAddr::new(a.host, a.port), state))
        .map_err(|e| CmdError::failure(e.to_string()))?;
    Ok(EXIT_OK)
}
