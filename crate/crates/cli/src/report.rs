//! Run reports built from a session and rendered as JSON or Markdown.

use chrono::{DateTime, Utc};
use ontowb_core::align::{align, apply_review, AlignmentReport, ReviewDecision, ReviewOutcome};
use ontowb_core::lint::{check_structural_consistency, lint, Consistency, LintFinding};
use ontowb_core::metrics::{EvaluationMetrics, MetricsDisplay};
use ontowb_core::ontology::{EntityKind, Ontology};
use ontowb_core::swrl::{compare_rules, rule_metrics, ModeMetrics, RuleComparison};
use ontowb_core::{MetricsError, ReviewError};
use ontowb_llm::session::WorkflowSession;
use ontowb_llm::Methodology;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = concat!("ontowb ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("session {0} has no gold ontology")]
    NoGold(String),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Review(#[from] ReviewError),
}

/// Raw ratios together with the rounded strings shown to people.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricsSummary {
    #[serde(flatten)]
    pub metrics: EvaluationMetrics,
    pub display: MetricsDisplay,
}

impl From<EvaluationMetrics> for MetricsSummary {
    fn from(metrics: EvaluationMetrics) -> Self {
        let display = metrics.display();
        Self { metrics, display }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RuleSummary {
    pub comparison: RuleComparison,
    pub metrics: RuleMetricsSummary,
}

impl RuleSummary {
    pub fn new(comparison: RuleComparison) -> Self {
        let m = rule_metrics(&comparison);
        Self { comparison, metrics: RuleMetricsSummary { sc: m.sc.into(), lc: m.lc.into() } }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleMetricsSummary {
    pub sc: ModeSummary,
    pub lc: ModeSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    #[serde(flatten)]
    pub metrics: ModeMetrics,
    pub display: MetricsDisplay,
}

impl From<ModeMetrics> for ModeSummary {
    fn from(metrics: ModeMetrics) -> Self {
        let display = metrics.display();
        Self { metrics, display }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub schema_version: u32,
    pub session_id: String,
    pub methodology: Methodology,
    pub provider: String,
    pub model: String,
    pub class_metrics: MetricsSummary,
    pub object_property_metrics: MetricsSummary,
    pub review_applied: bool,
    pub involvement_level: u8,
    pub lint_findings: Vec<LintFinding>,
    pub consistency: Consistency,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_comparison: Option<RuleSummary>,
    pub generated_at: DateTime<Utc>,
    pub tool_version: String,
}

/// Splits decisions by the kind of the entity they target in `generated`.
fn decisions_for(generated: &Ontology, kind: EntityKind, decisions: &[ReviewDecision]) -> Vec<ReviewDecision> {
    decisions
        .iter()
        .filter(|d| {
            let is_class = generated.classes.contains_key(&d.generated_iri);
            (kind == EntityKind::Class) == is_class
        })
        .cloned()
        .collect()
}

/// Alignment of the session's final ontology with its recorded decisions
/// applied. A session whose generation was rejected aligns as empty.
pub fn session_alignment(s: &WorkflowSession, kind: EntityKind) -> Result<ReviewOutcome, ReportError> {
    let gold = s.gold.as_ref().ok_or_else(|| ReportError::NoGold(s.id.clone()))?;
    let empty = Ontology::empty();
    let generated = s.final_ontology().unwrap_or(&empty);
    let report = align(generated, gold, kind, &s.alignment_config);
    Ok(apply_review(&report, &decisions_for(generated, kind, &s.decisions))?)
}

/// Applies `new` decisions on top of the session's current alignment.
pub fn review_step(
    s: &WorkflowSession,
    kind: EntityKind,
    new: &[ReviewDecision],
) -> Result<ReviewOutcome, ReportError> {
    let current = session_alignment(s, kind)?;
    Ok(apply_review(&current.report, new)?)
}

pub fn build_report(s: &WorkflowSession) -> Result<RunReport, ReportError> {
    let class = session_alignment(s, EntityKind::Class)?;
    let objprop = session_alignment(s, EntityKind::ObjectProperty)?;
    let empty = Ontology::empty();
    let generated = s.final_ontology().unwrap_or(&empty);
    let (lint_findings, consistency) = match s.evaluation() {
        Some((l, c)) => (l.to_vec(), c.clone()),
        None => (lint(generated), check_structural_consistency(generated)),
    };
    let rule_comparison = match (s.rule_outcome(), &s.gold_rule) {
        (Some(candidate), Some(gold)) => {
            Some(RuleSummary::new(match candidate {
                Some(rule) => compare_rules(rule, gold, None),
                None => RuleComparison::rejected(),
            }))
        }
        _ => None,
    };
    Ok(RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        session_id: s.id.clone(),
        methodology: s.methodology,
        provider: s.provider.clone(),
        model: s.model.clone(),
        class_metrics: class.after.into(),
        object_property_metrics: objprop.after.into(),
        review_applied: s.expert_review_applied(),
        involvement_level: s.involvement_level,
        lint_findings,
        consistency,
        rule_comparison,
        generated_at: s.updated_at,
        tool_version: TOOL_VERSION.to_string(),
    })
}

/// `| label | N | TP | FP | FN | P% | R% | F1% |`
pub fn markdown_row(label: &str, m: &EvaluationMetrics) -> String {
    let d = m.display();
    format!(
        "| {label} | {} | {} | {} | {} | {} | {} | {} |",
        m.tp + m.fp,
        m.tp,
        m.fp,
        m.fn_,
        d.precision,
        d.recall,
        d.f1
    )
}

pub const MARKDOWN_HEADER: &str = "| Run | Number of Classes | TP | FP | FN | Precision | Recall | F-1 score |\n|---|---|---|---|---|---|---|---|";

pub fn render_json(r: &RunReport) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize")
}

pub fn render_markdown(r: &RunReport) -> String {
    let label = format!("{} {}", r.provider, r.methodology);
    let mut out = format!("# Run report {}\n\n", r.session_id);
    out.push_str(&format!(
        "Methodology {}, provider {}, model {}, involvement level {}{}.\n\n",
        r.methodology,
        r.provider,
        r.model,
        r.involvement_level,
        if r.review_applied { ", expert review applied" } else { "" }
    ));
    out.push_str("## Classes\n\n");
    out.push_str(MARKDOWN_HEADER);
    out.push('\n');
    out.push_str(&markdown_row(&label, &r.class_metrics.metrics));
    out.push_str("\n\n## Object properties\n\n");
    out.push_str(&MARKDOWN_HEADER.replace("Number of Classes", "Number of Properties"));
    out.push('\n');
    out.push_str(&markdown_row(&label, &r.object_property_metrics.metrics));
    out.push_str("\n\n## Lint\n\n");
    if r.lint_findings.is_empty() {
        out.push_str("No findings.\n");
    }
    for f in &r.lint_findings {
        out.push_str(&format!("- {f}\n"));
    }
    out.push_str(&match &r.consistency {
        Consistency::Consistent => "\nStructurally consistent.\n".to_string(),
        Consistency::Inconsistent(cycle) => format!(
            "\nInconsistent: subclass cycle {}.\n",
            cycle.iter().map(|i| format!("<{i}>")).collect::<Vec<_>>().join(" -> ")
        ),
    });
    if let Some(rule) = &r.rule_comparison {
        let c = &rule.comparison;
        out.push_str("\n## Rule comparison\n\n| Mode | TP | FP | FN | Precision | Recall | F-1 score |\n|---|---|---|---|---|---|---|\n");
        for (mode, tp, fp, fn_, m) in
            [("SC", c.tp_sc, c.fp_sc, c.fn_sc, &rule.metrics.sc), ("LC", c.tp_lc, c.fp_lc, c.fn_lc, &rule.metrics.lc)]
        {
            out.push_str(&format!(
                "| {mode} | {tp} | {fp} | {fn_} | {} | {} | {} |\n",
                m.display.precision, m.display.recall, m.display.f1
            ));
        }
        if c.candidate_rejected {
            out.push_str("\nThe candidate rule was rejected by the parser.\n");
        }
    }
    out
}

/// Alignment output shared by `evaluate` and the alignment endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AlignmentSummary {
    pub schema_version: u32,
    pub kind: EntityKind,
    pub report: AlignmentReport,
    pub metrics: MetricsSummary,
}

impl AlignmentSummary {
    pub fn new(report: AlignmentReport) -> Result<Self, MetricsError> {
        let metrics = report.metrics()?.into();
        Ok(Self { schema_version: REPORT_SCHEMA_VERSION, kind: report.kind, report, metrics })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ontowb_core::metrics::compute_metrics;

    #[test]
    fn markdown_row_layout() {
        let m = compute_metrics(2, 0, 41).unwrap();
        assert_eq!(markdown_row("Llama2 OS", &m), "| Llama2 OS | 2 | 2 | 0 | 39 | 100% | 5% | 9% |");
    }

    #[test]
    fn metrics_summary_flattens() {
        let s: MetricsSummary = compute_metrics(50, 0, 41).unwrap().into();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["fn"], -9);
        assert_eq!(v["display"]["recall"], "122%");
        assert_eq!(v["flags"][0], "NegativeFN");
        let back: MetricsSummary = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}
