//! Pitfall lint catalog and the subClassOf cycle check.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ontology::{Iri, Ontology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LintSeverity {
    Minor,
    Important,
    Critical,
}

impl fmt::Display for LintSeverity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LintSeverity::Minor => "Minor",
            LintSeverity::Important => "Important",
            LintSeverity::Critical => "Critical",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "type", content = "iri")]
pub enum LintSubject {
    Document,
    Entity(Iri),
}

impl fmt::Display for LintSubject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LintSubject::Document => f.write_str("document"),
            LintSubject::Entity(iri) => write!(f, "<{iri}>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LintFinding {
    pub code: String,
    pub severity: LintSeverity,
    pub subject: LintSubject,
    pub message: String,
}

impl fmt::Display for LintFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.code, self.severity, self.subject, self.message)
    }
}

/// Registered codes and their fixed severities.
pub const CATALOG: [(&str, LintSeverity, &str); 5] = [
    ("P36", LintSeverity::Minor, "ontology IRI contains a file extension"),
    ("L01", LintSeverity::Minor, "declared entity has no rdfs:label"),
    ("L02", LintSeverity::Important, "missing owl:Ontology declaration"),
    ("L03", LintSeverity::Critical, "IRI declared as both class and object property"),
    ("L04", LintSeverity::Important, "subClassOf endpoint is neither declared nor imported"),
];

const FILE_EXTENSIONS: [&str; 9] = ["owl", "ttl", "rdf", "xml", "n3", "nt", "jsonld", "owx", "ofn"];

fn finding(code: &str, subject: LintSubject, message: String) -> LintFinding {
    let severity = CATALOG.iter().find(|c| c.0 == code).map(|c| c.1).expect("registered lint code");
    LintFinding { code: code.to_string(), severity, subject, message }
}

fn file_extension(iri: &Iri) -> Option<&'static str> {
    let s = iri.as_str().trim_end_matches(['#', '/']);
    let last = s.rsplit('/').next().unwrap_or(s);
    let (_, ext) = last.rsplit_once('.')?;
    FILE_EXTENSIONS.iter().copied().find(|e| e.eq_ignore_ascii_case(ext))
}

/// Runs the catalog. Findings are ordered by code, then subject.
pub fn lint(o: &Ontology) -> Vec<LintFinding> {
    let mut out = Vec::new();
    match &o.ontology_iri {
        Some(iri) => {
            if let Some(ext) = file_extension(iri) {
                out.push(finding(
                    "P36",
                    LintSubject::Entity(iri.clone()),
                    format!("ontology IRI {iri} ends in the file extension '.{ext}'"),
                ));
            }
        }
        None => out.push(finding("L02", LintSubject::Document, "no owl:Ontology declaration".into())),
    }
    for entity in o.classes.values().chain(o.object_properties.values()) {
        if entity.labels.is_empty() {
            out.push(finding(
                "L01",
                LintSubject::Entity(entity.iri.clone()),
                format!("{} has no rdfs:label", entity.kind),
            ));
        }
    }
    for iri in o.classes.keys().filter(|i| o.object_properties.contains_key(*i)) {
        out.push(finding(
            "L03",
            LintSubject::Entity(iri.clone()),
            "declared as both owl:Class and owl:ObjectProperty".into(),
        ));
    }
    let mut dangling = BTreeSet::new();
    for (child, parent) in &o.sub_class_edges {
        for end in [child, parent] {
            if !o.resolves_class(end) {
                dangling.insert(end.clone());
            }
        }
    }
    for iri in dangling {
        out.push(finding(
            "L04",
            LintSubject::Entity(iri),
            "used in rdfs:subClassOf but neither declared nor imported".into(),
        ));
    }
    out.sort_by(|a, b| a.code.cmp(&b.code).then_with(|| a.subject.cmp(&b.subject)));
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "status", content = "witness")]
pub enum Consistency {
    Consistent,
    /// A shortest cycle starting at its smallest IRI, without repeating the
    /// start at the end.
    Inconsistent(Vec<Iri>),
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent)
    }
}

/// Detects directed cycles in the subClassOf graph. Self-loops count as
/// cycles of length one. Among shortest cycles, the one through the
/// lexicographically smallest IRI is reported, starting at that IRI.
pub fn check_structural_consistency(o: &Ontology) -> Consistency {
    let mut succ: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
    for (child, parent) in &o.sub_class_edges {
        succ.entry(child).or_default().push(parent);
    }
    let mut best: Option<Vec<Iri>> = None;
    for &start in succ.keys() {
        // BFS for the shortest path from `start` back to itself.
        let mut prev: BTreeMap<&Iri, &Iri> = BTreeMap::new();
        let mut queue = VecDeque::from([start]);
        let mut found = None;
        let mut seen = BTreeSet::new();
        'bfs: while let Some(node) = queue.pop_front() {
            for &next in succ.get(node).map(Vec::as_slice).unwrap_or(&[]) {
                if next == start {
                    found = Some(node);
                    break 'bfs;
                }
                if seen.insert(next) {
                    prev.insert(next, node);
                    queue.push_back(next);
                }
            }
        }
        let Some(mut last) = found else { continue };
        let mut cycle = vec![last.clone()];
        while last != start {
            last = prev[last];
            cycle.push(last.clone());
        }
        cycle.reverse();
        if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
            best = Some(cycle);
        }
    }
    match best {
        Some(c) => Consistency::Inconsistent(c),
        None => Consistency::Consistent,
    }
}
