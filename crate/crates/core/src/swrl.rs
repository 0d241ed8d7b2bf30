//! SWRL rules in human-readable surface syntax, canonicalization, and the
//! atom-level syntactic (SC) / logical (LC) comparison against a gold rule.
//!
//! Surface syntax: `Observation(?o) ^ observedProperty(?o, ?p) -> Alert(?o)`.
//! Predicates are bare names (resolved against the default namespace),
//! prefixed names or `<full IRIs>`. `∧` and `→` are accepted as synonyms.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::align::{similarity, AlignmentConfig, AlignmentReport};
use crate::diagnostics::{last_position, ParseDiagnostic, ParseOutcome, Position};
use crate::metrics::{format_percent, precision_recall_f1, MetricFlag, MetricsDisplay};
use crate::ontology::{normalize, Iri, NormalizedName, OWL_NS, RDFS_NS, RDF_NS, XSD_NS};
use crate::turtle::Compactor;

pub const SWRL_NS: &str = "http://www.w3.org/2003/11/swrl#";
pub const SWRLB_NS: &str = "http://www.w3.org/2003/11/swrlb#";
pub const DEFAULT_RULE_NS: &str = "http://w3id.org/ontowb/rule#";
const UNDECLARED_NS_BASE: &str = "http://w3id.org/ontowb/undeclared/";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "type", content = "value")]
pub enum Term {
    Variable(String),
    Individual(Iri),
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SwrlAtom {
    pub predicate: Iri,
    pub args: Vec<Term>,
}

impl SwrlAtom {
    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SwrlRule {
    pub body: Vec<SwrlAtom>,
    pub head: Vec<SwrlAtom>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Body,
    Head,
}

impl SwrlRule {
    pub fn atom_count(&self) -> usize {
        self.body.len() + self.head.len()
    }

    /// Body atoms then head atoms, tagged with their side.
    pub fn atoms(&self) -> impl Iterator<Item = (Side, &SwrlAtom)> {
        self.body.iter().map(|a| (Side::Body, a)).chain(self.head.iter().map(|a| (Side::Head, a)))
    }

    /// Surface syntax using `prefixes` where a safe prefixed name exists.
    pub fn render(&self, prefixes: &BTreeMap<String, String>) -> String {
        let c = Compactor::new(prefixes);
        let side = |atoms: &[SwrlAtom]| {
            atoms.iter().map(|a| render_atom(a, &c)).collect::<Vec<_>>().join(" ^ ")
        };
        let body = side(&self.body);
        if body.is_empty() {
            format!("-> {}", side(&self.head))
        } else {
            format!("{body} -> {}", side(&self.head))
        }
    }
}

fn render_atom(atom: &SwrlAtom, c: &Compactor<'_>) -> String {
    let args: Vec<String> = atom
        .args
        .iter()
        .map(|t| match t {
            Term::Variable(v) => format!("?{v}"),
            Term::Individual(i) => c.compact(i.as_str()),
            Term::Literal(l) => crate::turtle::escape_string(l),
        })
        .collect();
    format!("{}({})", c.compact(atom.predicate.as_str()), args.join(", "))
}

impl fmt::Display for SwrlRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&BTreeMap::new()))
    }
}

/// Namespace resolution for rule text.
#[derive(Debug, Clone)]
pub struct SwrlContext {
    pub prefixes: BTreeMap<String, String>,
    pub default_namespace: String,
}

impl Default for SwrlContext {
    fn default() -> Self {
        Self::with_prefixes(BTreeMap::new())
    }
}

impl SwrlContext {
    /// Standard vocabularies are always available; `prefixes` override them.
    pub fn with_prefixes(prefixes: BTreeMap<String, String>) -> Self {
        let mut all: BTreeMap<String, String> = [
            ("rdf", RDF_NS),
            ("rdfs", RDFS_NS),
            ("owl", OWL_NS),
            ("xsd", XSD_NS),
            ("swrl", SWRL_NS),
            ("swrlb", SWRLB_NS),
        ]
        .into_iter()
        .map(|(p, ns)| (p.to_string(), ns.to_string()))
        .collect();
        let default_namespace =
            prefixes.get("").cloned().unwrap_or_else(|| DEFAULT_RULE_NS.to_string());
        all.extend(prefixes);
        Self { prefixes: all, default_namespace }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Iri(String),
    Var(String),
    Str(String),
    Number(String),
    LParen,
    RParen,
    Comma,
    And,
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("'{n}'"),
            Tok::Iri(i) => format!("<{i}>"),
            Tok::Var(v) => format!("'?{v}'"),
            Tok::Str(_) => "string literal".into(),
            Tok::Number(n) => format!("'{n}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::And => "'^'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::Eof => "end of rule".into(),
        }
    }
}

struct Lexer {
    chars: Vec<char>,
    idx: usize,
    pos: Position,
    last: Position,
}

type Lexed = Result<(Tok, Position), (Position, String)>;

impl Lexer {
    fn new(text: &str) -> Self {
        Self { chars: text.chars().collect(), idx: 0, pos: Position::START, last: Position::START }
    }

    fn peek(&self, off: usize) -> Option<char> {
        self.chars.get(self.idx + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek(0)?;
        self.last = self.pos;
        self.idx += 1;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn name_char(c: char) -> bool {
        c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | '#' | '/')
    }

    fn next(&mut self) -> Lexed {
        while self.peek(0).is_some_and(char::is_whitespace) {
            self.bump();
        }
        let pos = self.pos;
        let Some(c) = self.peek(0) else { return Ok((Tok::Eof, self.last)) };
        let tok = match c {
            '(' | ')' | ',' | '^' | '∧' | '→' => {
                self.bump();
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '→' => Tok::Arrow,
                    _ => Tok::And,
                }
            }
            '-' if self.peek(1) == Some('>') => {
                self.bump();
                self.bump();
                Tok::Arrow
            }
            '?' => {
                self.bump();
                let mut v = String::new();
                while let Some(c) = self.peek(0).filter(|c| c.is_alphanumeric() || *c == '_' || *c == '-') {
                    if c == '-' && self.peek(1) == Some('>') {
                        break;
                    }
                    v.push(c);
                    self.bump();
                }
                if v.is_empty() {
                    return Err((pos, "expected a variable name after '?'".into()));
                }
                Tok::Var(v)
            }
            '<' => {
                self.bump();
                let mut iri = String::new();
                loop {
                    match self.bump() {
                        Some('>') => break,
                        Some(c) if c.is_whitespace() => return Err((pos, "whitespace inside IRI".into())),
                        Some(c) => iri.push(c),
                        None => return Err((pos, "unterminated IRI".into())),
                    }
                }
                Tok::Iri(iri)
            }
            '"' | '\'' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some('r') => s.push('\r'),
                            Some(e @ ('"' | '\'' | '\\')) => s.push(e),
                            _ => return Err((self.last, "invalid escape in literal".into())),
                        },
                        Some(q) if q == c => break,
                        Some(ch) => s.push(ch),
                        None => return Err((pos, "unterminated literal".into())),
                    }
                }
                // Datatype or language suffixes are accepted and not modeled.
                if self.peek(0) == Some('^') && self.peek(1) == Some('^') {
                    self.bump();
                    self.bump();
                    if self.peek(0) == Some('<') {
                        while let Some(c) = self.bump() {
                            if c == '>' {
                                break;
                            }
                        }
                    } else {
                        while self.peek(0).is_some_and(Self::name_char) {
                            self.bump();
                        }
                    }
                } else if self.peek(0) == Some('@') {
                    self.bump();
                    while self.peek(0).is_some_and(|c| c.is_ascii_alphanumeric() || c == '-') {
                        self.bump();
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() || (c == '-' && self.peek(1).is_some_and(|d| d.is_ascii_digit())) => {
                let mut n = String::new();
                n.push(c);
                self.bump();
                while let Some(d) = self.peek(0).filter(|d| d.is_ascii_digit() || *d == '.' || *d == 'e' || *d == 'E') {
                    n.push(d);
                    self.bump();
                }
                Tok::Number(n)
            }
            c if c.is_alphabetic() || c == '_' || c == ':' => {
                let mut n = String::new();
                while let Some(c) = self.peek(0).filter(|c| Self::name_char(*c)) {
                    // '-' followed by '>' is the arrow, not part of the name.
                    if c == '-' && self.peek(1) == Some('>') {
                        break;
                    }
                    n.push(c);
                    self.bump();
                }
                while n.ends_with('.') {
                    n.pop();
                }
                Tok::Name(n)
            }
            other => {
                self.bump();
                return Err((pos, format!("unexpected character {other:?}")));
            }
        };
        Ok((tok, pos))
    }
}

struct RuleParser<'a> {
    src: &'a str,
    ctx: &'a SwrlContext,
    lexer: Lexer,
    look: (Tok, Position),
    diagnostics: Vec<ParseDiagnostic>,
}

struct Abort;

impl<'a> RuleParser<'a> {
    fn advance(&mut self) -> Result<(Tok, Position), Abort> {
        match self.lexer.next() {
            Ok(next) => Ok(std::mem::replace(&mut self.look, next)),
            Err((pos, msg)) => {
                self.error(pos, msg);
                Err(Abort)
            }
        }
    }

    fn error(&mut self, pos: Position, msg: impl Into<String>) {
        self.diagnostics.push(ParseDiagnostic::error(pos, msg, self.src));
    }

    fn resolve(&mut self, name: &str, pos: Position) -> Result<Iri, Abort> {
        let full = match name.split_once(':') {
            Some((prefix, local)) if !local.starts_with("//") => match self.ctx.prefixes.get(prefix) {
                Some(ns) => format!("{ns}{local}"),
                None if prefix.is_empty() => format!("{}{local}", self.ctx.default_namespace),
                None => {
                    self.diagnostics.push(ParseDiagnostic::warning(
                        pos,
                        format!("undeclared prefix '{prefix}:'"),
                        self.src,
                    ));
                    format!("{UNDECLARED_NS_BASE}{prefix}#{local}")
                }
            },
            Some(_) => name.to_string(),
            None => format!("{}{name}", self.ctx.default_namespace),
        };
        Iri::new(&full).map_err(|_| {
            self.error(pos, format!("'{name}' does not resolve to an absolute IRI"));
            Abort
        })
    }

    fn rule(&mut self) -> Result<SwrlRule, Abort> {
        let body = if self.look.0 == Tok::Arrow { Vec::new() } else { self.atoms()? };
        if self.look.0 != Tok::Arrow {
            let (tok, pos) = self.look.clone();
            self.error(pos, format!("expected '->' between body and head, found {}", tok.describe()));
            return Err(Abort);
        }
        let arrow_pos = self.advance()?.1;
        if self.look.0 == Tok::Eof {
            self.error(arrow_pos, "rule head is empty");
            return Err(Abort);
        }
        let head = self.atoms()?;
        if self.look.0 != Tok::Eof {
            let (tok, pos) = self.look.clone();
            self.error(pos, format!("unexpected {} after rule head", tok.describe()));
            return Err(Abort);
        }
        let body_vars: BTreeSet<&str> = body.iter().flat_map(|a| a.args.iter()).filter_map(var_name).collect();
        for atom in &head {
            for v in atom.args.iter().filter_map(var_name) {
                if !body_vars.contains(v) {
                    self.error(arrow_pos, format!("head variable ?{v} does not occur in the body"));
                    return Err(Abort);
                }
            }
        }
        Ok(SwrlRule { body, head })
    }

    fn atoms(&mut self) -> Result<Vec<SwrlAtom>, Abort> {
        let mut atoms = vec![self.atom()?];
        while self.look.0 == Tok::And {
            self.advance()?;
            atoms.push(self.atom()?);
        }
        Ok(atoms)
    }

    fn atom(&mut self) -> Result<SwrlAtom, Abort> {
        let (tok, pos) = self.advance()?;
        let predicate = match tok {
            Tok::Name(n) => self.resolve(&n, pos)?,
            Tok::Iri(i) => self.resolve(&i, pos)?,
            other => {
                self.error(pos, format!("expected a predicate, found {}", other.describe()));
                return Err(Abort);
            }
        };
        let (open, open_pos) = self.advance()?;
        if open != Tok::LParen {
            self.error(open_pos, format!("expected '(' after predicate, found {}", open.describe()));
            return Err(Abort);
        }
        let mut args = Vec::new();
        loop {
            let (tok, pos) = self.advance()?;
            let term = match tok {
                Tok::Var(v) => Term::Variable(v),
                Tok::Name(n) if n == "true" || n == "false" => Term::Literal(n),
                Tok::Name(n) => Term::Individual(self.resolve(&n, pos)?),
                Tok::Iri(i) => Term::Individual(self.resolve(&i, pos)?),
                Tok::Str(s) | Tok::Number(s) => Term::Literal(s),
                other => {
                    self.error(pos, format!("expected an argument, found {}", other.describe()));
                    return Err(Abort);
                }
            };
            args.push(term);
            let (sep, sep_pos) = self.advance()?;
            match sep {
                Tok::Comma => continue,
                Tok::RParen => break,
                other => {
                    self.error(sep_pos, format!("expected ',' or ')', found {}", other.describe()));
                    return Err(Abort);
                }
            }
        }
        if args.len() > 2 {
            self.error(pos, format!("atom has arity {}; only unary and binary atoms are supported", args.len()));
            return Err(Abort);
        }
        Ok(SwrlAtom { predicate, args })
    }
}

fn var_name(t: &Term) -> Option<&str> {
    match t {
        Term::Variable(v) => Some(v),
        _ => None,
    }
}

/// Parses a rule with the standard vocabulary prefixes only.
pub fn parse_swrl(text: &str) -> ParseOutcome<SwrlRule> {
    parse_swrl_with(text, &SwrlContext::default())
}

pub fn parse_swrl_with(text: &str, ctx: &SwrlContext) -> ParseOutcome<SwrlRule> {
    let mut parser = RuleParser {
        src: text,
        ctx,
        lexer: Lexer::new(text),
        look: (Tok::Eof, Position::START),
        diagnostics: Vec::new(),
    };
    if text.trim().is_empty() {
        let d = ParseDiagnostic::error(last_position(text), "empty rule", text);
        return ParseOutcome::rejected(vec![d]);
    }
    let result = parser.advance().and_then(|_| parser.rule());
    match result {
        Ok(rule) => ParseOutcome::from_parts(rule, parser.diagnostics),
        Err(Abort) => {
            if !parser.diagnostics.iter().any(ParseDiagnostic::is_error) {
                parser.error(last_position(text), "malformed rule");
            }
            ParseOutcome::rejected(parser.diagnostics)
        }
    }
}

/// Renames variables to `?v1, ?v2, …` in first-occurrence order over the
/// body then the head.
pub fn canonicalize(rule: &SwrlRule) -> SwrlRule {
    let mut names: HashMap<String, String> = HashMap::new();
    let mut rename = |atoms: &[SwrlAtom]| -> Vec<SwrlAtom> {
        atoms
            .iter()
            .map(|a| SwrlAtom {
                predicate: a.predicate.clone(),
                args: a
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Variable(v) => {
                            let next = names.len() + 1;
                            Term::Variable(names.entry(v.clone()).or_insert_with(|| format!("v{next}")).clone())
                        }
                        other => other.clone(),
                    })
                    .collect(),
            })
            .collect()
    };
    let body = rename(&rule.body);
    let head = rename(&rule.head);
    SwrlRule { body, head }
}

/// Extracts rule text from a free-form reply: the first fenced block, else
/// the first line containing an implication arrow.
pub fn extract_rule_from_response(llm_text: &str) -> Option<String> {
    let mut lines = llm_text.lines();
    while let Some(line) = lines.next() {
        if line.trim_start().starts_with("```") {
            let body: Vec<&str> = lines
                .by_ref()
                .take_while(|l| !l.trim_start().starts_with("```"))
                .filter(|l| !l.trim().is_empty())
                .collect();
            return Some(body.join(" ").trim().to_string());
        }
    }
    llm_text
        .lines()
        .find(|l| l.contains("->") || l.contains('→'))
        .map(|l| l.trim().to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CompareMode {
    Sc,
    Lc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MatchedAtoms {
    pub candidate: usize,
    pub gold: usize,
    pub mode: CompareMode,
}

/// Atom-level comparison counts. Indices refer to body-then-head order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RuleComparison {
    pub tp_sc: usize,
    pub fp_sc: usize,
    pub fn_sc: usize,
    pub tp_lc: usize,
    pub fp_lc: usize,
    pub fn_lc: usize,
    pub matched_pairs: Vec<MatchedAtoms>,
    /// Set when the candidate could not be parsed; all counts are zero.
    #[serde(default)]
    pub candidate_rejected: bool,
}

impl RuleComparison {
    /// Comparison recorded for a candidate that failed to parse.
    pub fn rejected() -> Self {
        Self { candidate_rejected: true, ..Self::default() }
    }
}

fn atom_name(iri: &Iri) -> NormalizedName {
    normalize(iri.local_name())
        .or_else(|_| normalize(iri.as_str()))
        .expect("absolute IRIs contain alphanumerics")
}

fn same_term(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Variable(x), Term::Variable(y)) => x == y,
        (Term::Individual(x), Term::Individual(y)) => atom_name(x) == atom_name(y),
        (Term::Literal(x), Term::Literal(y)) => x == y,
        _ => false,
    }
}

struct Predicates<'a> {
    alignment: Option<&'a AlignmentReport>,
    config: AlignmentConfig,
}

impl Predicates<'_> {
    fn equivalent(&self, candidate: &Iri, gold: &Iri) -> bool {
        let (cn, gn) = (atom_name(candidate), atom_name(gold));
        if cn == gn {
            return true;
        }
        if let Some(report) = self.alignment {
            let mapped = report.pairs.iter().any(|p| {
                (p.generated == *candidate || atom_name(&p.generated) == cn)
                    && (p.gold == *gold || atom_name(&p.gold) == gn)
            });
            if mapped {
                return true;
            }
        }
        similarity(&cn, &gn, self.config.similarity_measure) >= self.config.similarity_threshold
    }
}

/// Compares canonicalized rules atom by atom.
///
/// SC pairs atoms with the same side, the same normalized predicate local
/// name and identical arguments. LC starts from the SC pairs and extends them
/// with atoms on the same side with the same arity whose predicates are
/// equivalent under the alignment or have name similarity at least the
/// alignment threshold. Both passes are greedy in candidate order, taking the
/// lowest unused gold index.
pub fn compare_rules(
    candidate: &SwrlRule,
    gold: &SwrlRule,
    alignment: Option<&AlignmentReport>,
) -> RuleComparison {
    let config = alignment.map(|a| a.config.clone()).unwrap_or_default();
    let preds = Predicates { alignment, config };
    let cand: Vec<(Side, &SwrlAtom)> = candidate.atoms().collect();
    let gold_atoms: Vec<(Side, &SwrlAtom)> = gold.atoms().collect();

    let sc = |c: &(Side, &SwrlAtom), g: &(Side, &SwrlAtom)| {
        c.0 == g.0
            && atom_name(&c.1.predicate) == atom_name(&g.1.predicate)
            && c.1.arity() == g.1.arity()
            && c.1.args.iter().zip(&g.1.args).all(|(x, y)| same_term(x, y))
    };
    let lc = |c: &(Side, &SwrlAtom), g: &(Side, &SwrlAtom)| {
        c.0 == g.0 && c.1.arity() == g.1.arity() && preds.equivalent(&c.1.predicate, &g.1.predicate)
    };

    let mut pairs = Vec::new();
    let mut sc_gold_used = vec![false; gold_atoms.len()];
    let mut sc_cand_matched = vec![None; cand.len()];
    for (ci, c) in cand.iter().enumerate() {
        if let Some(gi) = (0..gold_atoms.len()).find(|&gi| !sc_gold_used[gi] && sc(c, &gold_atoms[gi])) {
            sc_gold_used[gi] = true;
            sc_cand_matched[ci] = Some(gi);
            pairs.push(MatchedAtoms { candidate: ci, gold: gi, mode: CompareMode::Sc });
        }
    }

    let mut lc_gold_used = sc_gold_used.clone();
    let mut lc_pairs: Vec<MatchedAtoms> = sc_cand_matched
        .iter()
        .enumerate()
        .filter_map(|(ci, g)| g.map(|gi| MatchedAtoms { candidate: ci, gold: gi, mode: CompareMode::Lc }))
        .collect();
    for (ci, c) in cand.iter().enumerate() {
        if sc_cand_matched[ci].is_some() {
            continue;
        }
        if let Some(gi) = (0..gold_atoms.len()).find(|&gi| !lc_gold_used[gi] && lc(c, &gold_atoms[gi])) {
            lc_gold_used[gi] = true;
            lc_pairs.push(MatchedAtoms { candidate: ci, gold: gi, mode: CompareMode::Lc });
        }
    }
    lc_pairs.sort_by_key(|m| m.candidate);

    let tp_sc = pairs.len();
    let tp_lc = lc_pairs.len();
    pairs.extend(lc_pairs);
    RuleComparison {
        tp_sc,
        fp_sc: cand.len() - tp_sc,
        fn_sc: gold_atoms.len() - tp_sc,
        tp_lc,
        fp_lc: cand.len() - tp_lc,
        fn_lc: gold_atoms.len() - tp_lc,
        matched_pairs: pairs,
        candidate_rejected: false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModeMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub flags: BTreeSet<MetricFlag>,
}

impl ModeMetrics {
    pub fn undefined(&self) -> bool {
        self.flags.contains(&MetricFlag::UndefinedPrecision) || self.flags.contains(&MetricFlag::UndefinedRecall)
    }

    pub fn display(&self) -> MetricsDisplay {
        MetricsDisplay {
            precision: format_percent(self.precision),
            recall: format_percent(self.recall),
            f1: format_percent(self.f1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RuleMetrics {
    pub sc: ModeMetrics,
    pub lc: ModeMetrics,
}

fn mode_metrics(tp: usize, fp: usize, fn_: usize) -> ModeMetrics {
    let m = precision_recall_f1(tp as f64, fp as f64, fn_ as f64);
    ModeMetrics { precision: m.precision, recall: m.recall, f1: m.f1, flags: m.flags }
}

/// Precision, recall and F1 for both comparison modes.
pub fn rule_metrics(c: &RuleComparison) -> RuleMetrics {
    RuleMetrics { sc: mode_metrics(c.tp_sc, c.fp_sc, c.fn_sc), lc: mode_metrics(c.tp_lc, c.fp_lc, c.fn_lc) }
}
