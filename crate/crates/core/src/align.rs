//! Entity alignment between a generated ontology and a gold standard:
//! an exact phase on normalized names, then an optional greedy similarity
//! phase, followed by expert-review reclassification of false positives.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{AlignError, ReviewError};
use crate::metrics::{compute_metrics, EvaluationMetrics};
use crate::ontology::{entity_names, EntityKind, Iri, NormalizedName, Ontology};
use crate::MetricsError;

pub const DEFAULT_THRESHOLD: f64 = 0.85;
pub const BRUTE_FORCE_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SimilarityMeasure {
    #[default]
    TokenJaccard,
    NormalizedLevenshtein,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlignMode {
    ExactOnly,
    #[default]
    ExactThenSimilarity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AlignmentConfig {
    pub similarity_threshold: f64,
    pub similarity_measure: SimilarityMeasure,
    pub mode: AlignMode,
}

impl Default for AlignmentConfig {
    fn default() -> Self {
        Self {
            similarity_threshold: DEFAULT_THRESHOLD,
            similarity_measure: SimilarityMeasure::default(),
            mode: AlignMode::default(),
        }
    }
}

impl AlignmentConfig {
    pub fn new(threshold: f64, measure: SimilarityMeasure, mode: AlignMode) -> Result<Self, AlignError> {
        let config = Self { similarity_threshold: threshold, similarity_measure: measure, mode };
        config.validate()?;
        Ok(config)
    }

    pub fn exact_only() -> Self {
        Self { mode: AlignMode::ExactOnly, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), AlignError> {
        if (0.0..=1.0).contains(&self.similarity_threshold) {
            Ok(())
        } else {
            Err(AlignError::InvalidThreshold(self.similarity_threshold))
        }
    }
}

/// Similarity of two normalized names in `[0, 1]`.
///
/// `TokenJaccard` compares token sets; `NormalizedLevenshtein` compares the
/// joined token strings.
pub fn similarity(a: &NormalizedName, b: &NormalizedName, measure: SimilarityMeasure) -> f64 {
    match measure {
        SimilarityMeasure::TokenJaccard => {
            let sa: BTreeSet<&str> = a.tokens().iter().map(String::as_str).collect();
            let sb: BTreeSet<&str> = b.tokens().iter().map(String::as_str).collect();
            let union = sa.union(&sb).count();
            if union == 0 {
                return 1.0;
            }
            sa.intersection(&sb).count() as f64 / union as f64
        }
        SimilarityMeasure::NormalizedLevenshtein => strsim::normalized_levenshtein(&a.joined(), &b.joined()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatchType {
    Exact,
    Similar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AlignedPair {
    pub generated: Iri,
    pub gold: Iri,
    pub score: f64,
    pub match_type: MatchType,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AlignmentReport {
    pub kind: EntityKind,
    /// Sorted by generated IRI.
    pub pairs: Vec<AlignedPair>,
    pub true_positives: BTreeSet<Iri>,
    pub false_positives: BTreeSet<Iri>,
    pub false_negatives: BTreeSet<Iri>,
    pub config: AlignmentConfig,
    pub gold_count: u64,
}

impl AlignmentReport {
    fn from_pairs(
        kind: EntityKind,
        generated: &[(Iri, NormalizedName)],
        gold: &[(Iri, NormalizedName)],
        mut pairs: Vec<AlignedPair>,
        config: &AlignmentConfig,
    ) -> Self {
        pairs.sort_by(|a, b| a.generated.cmp(&b.generated).then_with(|| a.gold.cmp(&b.gold)));
        let true_positives: BTreeSet<Iri> = pairs.iter().map(|p| p.generated.clone()).collect();
        let matched_gold: BTreeSet<&Iri> = pairs.iter().map(|p| &p.gold).collect();
        let false_positives =
            generated.iter().map(|(i, _)| i).filter(|i| !true_positives.contains(*i)).cloned().collect();
        let false_negatives = gold.iter().map(|(i, _)| i).filter(|i| !matched_gold.contains(i)).cloned().collect();
        Self {
            kind,
            pairs,
            true_positives,
            false_positives,
            false_negatives,
            config: config.clone(),
            gold_count: gold.len() as u64,
        }
    }

    /// Metrics with `fn = goldCount - tp`.
    pub fn metrics(&self) -> Result<EvaluationMetrics, MetricsError> {
        compute_metrics(self.true_positives.len() as u64, self.false_positives.len() as u64, self.gold_count as i64)
    }
}

/// Aligns the entities of `kind`.
///
/// Exact phase: generated entities in IRI order take the first unmatched
/// gold entity (in IRI order) with an equal normalized name. Similarity
/// phase: the remaining pairs scoring at least the threshold are sorted by
/// descending score, then by `(generated, gold)` IRI, and accepted greedily
/// while both endpoints are free.
pub fn align(generated: &Ontology, gold: &Ontology, kind: EntityKind, config: &AlignmentConfig) -> AlignmentReport {
    let gen_names = entity_names(generated, kind);
    let gold_names = entity_names(gold, kind);
    let mut gen_used = vec![false; gen_names.len()];
    let mut gold_used = vec![false; gold_names.len()];
    let mut pairs = Vec::new();

    let mut gold_by_name: BTreeMap<&NormalizedName, Vec<usize>> = BTreeMap::new();
    for (gi, (_, name)) in gold_names.iter().enumerate() {
        gold_by_name.entry(name).or_default().push(gi);
    }
    for (ci, (c_iri, name)) in gen_names.iter().enumerate() {
        let Some(candidates) = gold_by_name.get(name) else { continue };
        if let Some(&gi) = candidates.iter().find(|&&gi| !gold_used[gi]) {
            gold_used[gi] = true;
            gen_used[ci] = true;
            pairs.push(AlignedPair {
                generated: c_iri.clone(),
                gold: gold_names[gi].0.clone(),
                score: 1.0,
                match_type: MatchType::Exact,
            });
        }
    }

    if config.mode == AlignMode::ExactThenSimilarity {
        let mut candidates = Vec::new();
        for (ci, (_, cn)) in gen_names.iter().enumerate().filter(|(ci, _)| !gen_used[*ci]) {
            for (gi, (_, gn)) in gold_names.iter().enumerate().filter(|(gi, _)| !gold_used[*gi]) {
                let score = similarity(cn, gn, config.similarity_measure);
                if score >= config.similarity_threshold {
                    candidates.push((score, ci, gi));
                }
            }
        }
        // Entity lists are IRI-sorted, so index order is IRI order.
        candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        for (score, ci, gi) in candidates {
            if gen_used[ci] || gold_used[gi] {
                continue;
            }
            gen_used[ci] = true;
            gold_used[gi] = true;
            pairs.push(AlignedPair {
                generated: gen_names[ci].0.clone(),
                gold: gold_names[gi].0.clone(),
                score,
                match_type: MatchType::Similar,
            });
        }
    }

    AlignmentReport::from_pairs(kind, &gen_names, &gold_names, pairs, config)
}

/// Exhaustive optimum of the matching problem, for use as a test oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub report: AlignmentReport,
    /// Number of matchings that tie the optimum on pair count and total
    /// score; 1 means the optimum is unique before the lexicographic
    /// tie-break.
    pub optimal_matchings: usize,
}

/// Enumerates every injective matching over the eligible pairs and keeps the
/// one with the most pairs, then the highest total score, then the
/// lexicographically smallest `(generated, gold)` list.
pub fn brute_force_align(
    generated: &Ontology,
    gold: &Ontology,
    kind: EntityKind,
    config: &AlignmentConfig,
) -> Result<BruteForceResult, AlignError> {
    let gen_names = entity_names(generated, kind);
    let gold_names = entity_names(gold, kind);
    if gen_names.len() > BRUTE_FORCE_LIMIT || gold_names.len() > BRUTE_FORCE_LIMIT {
        return Err(AlignError::TooLarge {
            generated: gen_names.len(),
            gold: gold_names.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    // edges[ci] = eligible (gi, score, exact)
    let edges: Vec<Vec<(usize, f64, bool)>> = gen_names
        .iter()
        .map(|(_, cn)| {
            gold_names
                .iter()
                .enumerate()
                .filter_map(|(gi, (_, gn))| {
                    if cn == gn {
                        Some((gi, 1.0, true))
                    } else if config.mode == AlignMode::ExactThenSimilarity {
                        let s = similarity(cn, gn, config.similarity_measure);
                        (s >= config.similarity_threshold).then_some((gi, s, false))
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();

    struct Search<'a> {
        edges: &'a [Vec<(usize, f64, bool)>],
        used: Vec<bool>,
        current: Vec<(usize, usize, f64, bool)>,
        best: Option<(usize, f64, Vec<(usize, usize, f64, bool)>)>,
        ties: usize,
    }

    impl Search<'_> {
        fn run(&mut self, ci: usize) {
            if ci == self.edges.len() {
                self.consider();
                return;
            }
            self.run(ci + 1);
            for &(gi, s, exact) in &self.edges[ci] {
                if !self.used[gi] {
                    self.used[gi] = true;
                    self.current.push((ci, gi, s, exact));
                    self.run(ci + 1);
                    self.current.pop();
                    self.used[gi] = false;
                }
            }
        }

        fn consider(&mut self) {
            let count = self.current.len();
            let total: f64 = self.current.iter().map(|p| p.2).sum();
            // `current` is built in ascending generated order, so comparing
            // index pairs compares the IRI-sorted pair lists.
            let key: Vec<(usize, usize)> = self.current.iter().map(|p| (p.0, p.1)).collect();
            match &self.best {
                None => {
                    self.best = Some((count, total, self.current.clone()));
                    self.ties = 1;
                }
                Some((bc, bt, bp)) => {
                    let tie = count == *bc && (total - bt).abs() <= 1e-12;
                    let better = count > *bc || (count == *bc && total > bt + 1e-12);
                    if better {
                        self.best = Some((count, total, self.current.clone()));
                        self.ties = 1;
                    } else if tie {
                        self.ties += 1;
                        let best_key: Vec<(usize, usize)> = bp.iter().map(|p| (p.0, p.1)).collect();
                        if key < best_key {
                            self.best = Some((count, total, self.current.clone()));
                        }
                    }
                }
            }
        }
    }

    let mut search =
        Search { edges: &edges, used: vec![false; gold_names.len()], current: Vec::new(), best: None, ties: 0 };
    search.run(0);
    let (_, _, best) = search.best.expect("the empty matching is always considered");
    let pairs = best
        .into_iter()
        .map(|(ci, gi, score, exact)| AlignedPair {
            generated: gen_names[ci].0.clone(),
            gold: gold_names[gi].0.clone(),
            score,
            match_type: if exact { MatchType::Exact } else { MatchType::Similar },
        })
        .collect();
    Ok(BruteForceResult {
        report: AlignmentReport::from_pairs(kind, &gen_names, &gold_names, pairs, config),
        optimal_matchings: search.ties,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    ReclassifyToTP,
    KeepFP,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReviewDecision {
    pub generated_iri: Iri,
    pub verdict: Verdict,
    #[serde(default)]
    pub rationale: String,
    #[serde(default)]
    pub reviewer: String,
    pub timestamp: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReviewOutcome {
    pub report: AlignmentReport,
    pub before: EvaluationMetrics,
    pub after: EvaluationMetrics,
}

/// Applies expert decisions in order. Each decision must target an entity
/// that is a false positive at that point; reclassified entities become true
/// positives without a gold pair.
pub fn apply_review(report: &AlignmentReport, decisions: &[ReviewDecision]) -> Result<ReviewOutcome, ReviewError> {
    let before = report.metrics()?;
    let mut next = report.clone();
    for d in decisions {
        if !next.false_positives.contains(&d.generated_iri) {
            return Err(ReviewError::NotAFalsePositive(d.generated_iri.clone()));
        }
        if d.verdict == Verdict::ReclassifyToTP {
            next.false_positives.remove(&d.generated_iri);
            next.true_positives.insert(d.generated_iri.clone());
        }
    }
    let after = next.metrics()?;
    Ok(ReviewOutcome { report: next, before, after })
}
