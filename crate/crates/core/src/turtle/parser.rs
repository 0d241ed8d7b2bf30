use std::collections::{BTreeMap, HashMap};

use super::lexer::{LexError, Lexer, Tok, Token};
use super::RULE_ANNOTATION;
use crate::diagnostics::{last_position, ParseDiagnostic, ParseOutcome, Position};
use crate::ontology::{Entity, EntityKind, Iri, Label, Ontology, OWL_NS, RDFS_NS, RDF_NS};
use crate::swrl::{parse_swrl_with, SwrlContext};

const MAX_DIAGNOSTICS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
enum Term {
    Iri(String),
    Blank(String),
    Literal { value: String, lang: Option<String> },
}

#[derive(Debug, Clone)]
struct Triple {
    subject: Term,
    subject_pos: Position,
    predicate: String,
    object: Term,
    object_pos: Position,
}

struct Parser<'a> {
    src: &'a str,
    lexer: Lexer<'a>,
    look: Token,
    diagnostics: Vec<ParseDiagnostic>,
    prefixes: BTreeMap<String, String>,
    base: Option<String>,
    triples: Vec<Triple>,
    blank_counter: usize,
}

/// Aborts the current statement.
struct Abort;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let mut p = Self {
            src,
            lexer: Lexer::new(src),
            look: Token { tok: Tok::Eof, pos: Position::START },
            diagnostics: Vec::new(),
            prefixes: BTreeMap::new(),
            base: None,
            triples: Vec::new(),
            blank_counter: 0,
        };
        // Lexing errors at the very start are reported and skipped like any other.
        p.look = p.lex_recovering();
        p
    }

    fn error(&mut self, pos: Position, message: impl Into<String>) {
        if self.diagnostics.len() < MAX_DIAGNOSTICS {
            self.diagnostics.push(ParseDiagnostic::error(pos, message, self.src));
        }
    }

    fn warning(&mut self, pos: Position, message: impl Into<String>) {
        if self.diagnostics.len() < MAX_DIAGNOSTICS {
            self.diagnostics.push(ParseDiagnostic::warning(pos, message, self.src));
        }
    }

    fn lex_recovering(&mut self) -> Token {
        loop {
            match self.lexer.next_token() {
                Ok(t) => return t,
                Err(LexError { pos, message }) => self.error(pos, message),
            }
        }
    }

    fn advance(&mut self) -> Result<Token, Abort> {
        match self.lexer.next_token() {
            Ok(next) => Ok(std::mem::replace(&mut self.look, next)),
            Err(LexError { pos, message }) => {
                self.error(pos, message);
                Err(Abort)
            }
        }
    }

    fn expect(&mut self, want: Tok, context: &str) -> Result<Token, Abort> {
        if self.look.tok == want {
            self.advance()
        } else {
            let pos = self.look.pos;
            let msg = format!("expected {} {context}, found {}", want.describe(), self.look.tok.describe());
            self.error(pos, msg);
            Err(Abort)
        }
    }

    /// Skips to the token after the next statement terminator.
    fn recover(&mut self) {
        loop {
            match &self.look.tok {
                Tok::Eof => return,
                Tok::Dot => {
                    self.look = self.lex_recovering();
                    return;
                }
                _ => self.look = self.lex_recovering(),
            }
        }
    }

    fn parse_document(&mut self) {
        while self.look.tok != Tok::Eof {
            if self.statement().is_err() {
                self.recover();
            }
        }
    }

    fn statement(&mut self) -> Result<(), Abort> {
        match self.look.tok {
            Tok::AtPrefix => {
                self.advance()?;
                self.prefix_body()?;
                self.expect(Tok::Dot, "after @prefix directive")?;
            }
            Tok::SparqlPrefix => {
                self.advance()?;
                self.prefix_body()?;
            }
            Tok::AtBase => {
                self.advance()?;
                self.base_body()?;
                self.expect(Tok::Dot, "after @base directive")?;
            }
            Tok::SparqlBase => {
                self.advance()?;
                self.base_body()?;
            }
            _ => {
                self.triples_statement()?;
                self.expect(Tok::Dot, "at end of statement")?;
            }
        }
        Ok(())
    }

    fn prefix_body(&mut self) -> Result<(), Abort> {
        let tok = self.advance()?;
        let prefix = match tok.tok {
            Tok::PName { prefix, local } if local.is_empty() => prefix,
            other => {
                self.error(tok.pos, format!("expected a prefix name like 'ex:', found {}", other.describe()));
                return Err(Abort);
            }
        };
        let iri_tok = self.advance()?;
        let Tok::IriRef(raw) = iri_tok.tok else {
            self.error(iri_tok.pos, format!("expected namespace IRI, found {}", iri_tok.tok.describe()));
            return Err(Abort);
        };
        let ns = self.resolve_relative(&raw);
        if let Some(old) = self.prefixes.get(&prefix) {
            if *old != ns {
                self.warning(tok.pos, format!("prefix '{prefix}:' redefined"));
            }
        }
        self.prefixes.insert(prefix, ns);
        Ok(())
    }

    fn base_body(&mut self) -> Result<(), Abort> {
        let tok = self.advance()?;
        let Tok::IriRef(raw) = tok.tok else {
            self.error(tok.pos, format!("expected base IRI, found {}", tok.tok.describe()));
            return Err(Abort);
        };
        let resolved = self.resolve_relative(&raw);
        self.base = Some(resolved);
        Ok(())
    }

    fn resolve_relative(&self, raw: &str) -> String {
        if raw.contains(':') {
            return raw.to_string();
        }
        let Some(base) = &self.base else {
            return raw.to_string();
        };
        if raw.is_empty() {
            return base.clone();
        }
        if raw.starts_with('#') {
            let stem = base.split('#').next().unwrap_or(base);
            return format!("{stem}{raw}");
        }
        if let Some(rest) = raw.strip_prefix('/') {
            let authority_end = base
                .find("://")
                .and_then(|s| base[s + 3..].find('/').map(|i| s + 3 + i))
                .unwrap_or(base.len());
            return format!("{}/{rest}", &base[..authority_end]);
        }
        let dir_end = base.rfind('/').map(|i| i + 1).unwrap_or(base.len());
        format!("{}{raw}", &base[..dir_end])
    }

    fn fresh_blank(&mut self) -> Term {
        self.blank_counter += 1;
        Term::Blank(format!("genid{}", self.blank_counter))
    }

    fn triples_statement(&mut self) -> Result<(), Abort> {
        let pos = self.look.pos;
        match self.look.tok {
            Tok::LBracket => {
                let subject = self.blank_property_list()?;
                if self.look.tok != Tok::Dot {
                    self.predicate_object_list(&subject, pos)?;
                }
            }
            _ => {
                let subject = self.subject()?;
                self.predicate_object_list(&subject, pos)?;
            }
        }
        Ok(())
    }

    fn subject(&mut self) -> Result<Term, Abort> {
        let pos = self.look.pos;
        match self.look.tok.clone() {
            Tok::IriRef(_) | Tok::PName { .. } => self.iri().map(Term::Iri),
            Tok::Blank(label) => {
                self.advance()?;
                Ok(Term::Blank(label))
            }
            Tok::LParen => self.collection(),
            other => {
                self.error(pos, format!("expected a subject, found {}", other.describe()));
                Err(Abort)
            }
        }
    }

    fn iri(&mut self) -> Result<String, Abort> {
        let tok = self.advance()?;
        match tok.tok {
            Tok::IriRef(raw) => Ok(self.resolve_relative(&raw)),
            Tok::PName { prefix, local } => match self.prefixes.get(&prefix) {
                Some(ns) => Ok(format!("{ns}{local}")),
                None => {
                    self.error(tok.pos, format!("undeclared prefix '{prefix}:'"));
                    Err(Abort)
                }
            },
            other => {
                self.error(tok.pos, format!("expected an IRI, found {}", other.describe()));
                Err(Abort)
            }
        }
    }

    fn predicate_object_list(&mut self, subject: &Term, subject_pos: Position) -> Result<(), Abort> {
        loop {
            let predicate = match self.look.tok {
                Tok::A => {
                    self.advance()?;
                    format!("{RDF_NS}type")
                }
                Tok::IriRef(_) | Tok::PName { .. } => self.iri()?,
                _ => {
                    let pos = self.look.pos;
                    let msg = format!("expected a predicate, found {}", self.look.tok.describe());
                    self.error(pos, msg);
                    return Err(Abort);
                }
            };
            loop {
                let object_pos = self.look.pos;
                let object = self.object()?;
                self.triples.push(Triple {
                    subject: subject.clone(),
                    subject_pos,
                    predicate: predicate.clone(),
                    object,
                    object_pos,
                });
                if self.look.tok == Tok::Comma {
                    self.advance()?;
                } else {
                    break;
                }
            }
            if self.look.tok != Tok::Semicolon {
                return Ok(());
            }
            while self.look.tok == Tok::Semicolon {
                self.advance()?;
            }
            if matches!(self.look.tok, Tok::Dot | Tok::RBracket) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, Abort> {
        let pos = self.look.pos;
        match self.look.tok.clone() {
            Tok::IriRef(_) | Tok::PName { .. } => self.iri().map(Term::Iri),
            Tok::Blank(label) => {
                self.advance()?;
                Ok(Term::Blank(label))
            }
            Tok::LBracket => self.blank_property_list(),
            Tok::LParen => self.collection(),
            Tok::Str(value) => {
                self.advance()?;
                let mut lang = None;
                match self.look.tok.clone() {
                    Tok::LangTag(tag) => {
                        self.advance()?;
                        lang = Some(tag);
                    }
                    Tok::DoubleCaret => {
                        self.advance()?;
                        self.iri()?;
                    }
                    _ => {}
                }
                Ok(Term::Literal { value, lang })
            }
            Tok::Number(n) => {
                self.advance()?;
                Ok(Term::Literal { value: n, lang: None })
            }
            Tok::True | Tok::False => {
                let value = if self.look.tok == Tok::True { "true" } else { "false" };
                self.advance()?;
                Ok(Term::Literal { value: value.into(), lang: None })
            }
            other => {
                self.error(pos, format!("expected an object, found {}", other.describe()));
                Err(Abort)
            }
        }
    }

    fn blank_property_list(&mut self) -> Result<Term, Abort> {
        let open = self.expect(Tok::LBracket, "to open blank node")?;
        let node = self.fresh_blank();
        if self.look.tok != Tok::RBracket {
            self.predicate_object_list(&node, open.pos)?;
        }
        self.expect(Tok::RBracket, "to close blank node property list")?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term, Abort> {
        self.expect(Tok::LParen, "to open collection")?;
        let node = self.fresh_blank();
        while self.look.tok != Tok::RParen {
            if self.look.tok == Tok::Eof {
                let pos = self.look.pos;
                self.error(pos, "unterminated collection");
                return Err(Abort);
            }
            self.object()?;
        }
        self.advance()?;
        Ok(node)
    }

    fn model_iri(&mut self, raw: &str, pos: Position) -> Option<Iri> {
        match Iri::new(raw) {
            Ok(iri) => Some(iri),
            Err(_) => {
                let msg = if raw.contains(':') {
                    format!("IRI <{raw}> is not absolute (missing '://')")
                } else {
                    format!("relative IRI <{raw}> used without @base")
                };
                self.error(pos, msg);
                None
            }
        }
    }

    fn build(mut self) -> ParseOutcome<Ontology> {
        let rdf_type = format!("{RDF_NS}type");
        let owl_class = format!("{OWL_NS}Class");
        let owl_object_property = format!("{OWL_NS}ObjectProperty");
        let owl_ontology = format!("{OWL_NS}Ontology");
        let owl_imports = format!("{OWL_NS}imports");
        let sub_class_of = format!("{RDFS_NS}subClassOf");
        let label = format!("{RDFS_NS}label");
        let comment = format!("{RDFS_NS}comment");

        let mut ontology = Ontology { prefixes: self.prefixes.clone(), ..Ontology::default() };
        let mut labels: HashMap<String, Vec<Label>> = HashMap::new();
        let mut comments: HashMap<String, String> = HashMap::new();
        let mut declared: Vec<(Iri, EntityKind)> = Vec::new();
        let mut rule_texts: Vec<(String, Position)> = Vec::new();

        let triples = std::mem::take(&mut self.triples);
        for t in &triples {
            let subject_iri = match &t.subject {
                Term::Iri(s) => Some(s.as_str()),
                _ => None,
            };
            let p = t.predicate.as_str();
            if p == rdf_type {
                let (Some(s), Term::Iri(o)) = (subject_iri, &t.object) else { continue };
                let kind = if *o == owl_class {
                    Some(EntityKind::Class)
                } else if *o == owl_object_property {
                    Some(EntityKind::ObjectProperty)
                } else {
                    None
                };
                if let Some(kind) = kind {
                    if let Some(iri) = self.model_iri(s, t.subject_pos) {
                        declared.push((iri, kind));
                    }
                } else if *o == owl_ontology {
                    if let Some(iri) = self.model_iri(s, t.subject_pos) {
                        match &ontology.ontology_iri {
                            None => ontology.ontology_iri = Some(iri),
                            Some(existing) if *existing != iri => {
                                self.warning(t.subject_pos, format!("second ontology declaration <{iri}> ignored"));
                            }
                            Some(_) => {}
                        }
                    }
                }
            } else if p == owl_imports {
                if let Term::Iri(o) = &t.object {
                    if let Some(iri) = self.model_iri(o, t.object_pos) {
                        ontology.imported_iris.insert(iri);
                    }
                }
            } else if p == sub_class_of {
                if let (Some(s), Term::Iri(o)) = (subject_iri, &t.object) {
                    let child = self.model_iri(s, t.subject_pos);
                    let parent = self.model_iri(o, t.object_pos);
                    if let (Some(c), Some(p)) = (child, parent) {
                        ontology.sub_class_edges.insert((c, p));
                    }
                }
            } else if p == label || p == comment || p == RULE_ANNOTATION {
                let Term::Literal { value, lang } = &t.object else { continue };
                if p == RULE_ANNOTATION {
                    rule_texts.push((value.clone(), t.object_pos));
                    continue;
                }
                let Some(s) = subject_iri else { continue };
                if p == label {
                    let entry = labels.entry(s.to_string()).or_default();
                    let l = Label { value: value.clone(), lang: lang.clone() };
                    if !entry.contains(&l) {
                        entry.push(l);
                    }
                } else {
                    comments.entry(s.to_string()).or_insert_with(|| value.clone());
                }
            }
        }

        for (iri, kind) in declared {
            if ontology.entities(kind).contains_key(&iri) {
                continue;
            }
            let mut entity = Entity::new(iri.clone(), kind);
            entity.labels = labels.get(iri.as_str()).cloned().unwrap_or_default();
            entity.comment = comments.get(iri.as_str()).cloned();
            ontology.insert(entity);
        }

        let ctx = SwrlContext::with_prefixes(ontology.prefixes.clone());
        for (text, pos) in rule_texts {
            let outcome = parse_swrl_with(&text, &ctx);
            match outcome.value {
                Some(rule) => ontology.rules.push(rule),
                None => {
                    let detail = outcome
                        .errors()
                        .next()
                        .map(|d| d.message.clone())
                        .unwrap_or_else(|| "invalid rule".into());
                    self.error(pos, format!("invalid SWRL rule annotation: {detail}"));
                }
            }
        }

        ParseOutcome::from_parts(ontology, self.diagnostics)
    }
}

/// Parses the Turtle subset used for exchanged ontologies.
///
/// Unknown triples are accepted and ignored by the model. Any grammar
/// violation rejects the document and yields located error diagnostics.
pub fn parse_turtle(text: &str) -> ParseOutcome<Ontology> {
    let mut parser = Parser::new(text);
    parser.parse_document();
    // Keep every location inside the text even for errors reported at EOF.
    let end = last_position(text);
    for d in &mut parser.diagnostics {
        if (d.line, d.column) > (end.line, end.column) {
            d.line = end.line;
            d.column = end.column;
        }
    }
    parser.build()
}

/// Byte-level entry point: invalid UTF-8 is rejected with a diagnostic.
pub fn parse_turtle_bytes(bytes: &[u8]) -> ParseOutcome<Ontology> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_turtle(text),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let mut pos = Position::START;
            for c in valid.chars() {
                if c == '\n' {
                    pos.line += 1;
                    pos.column = 1;
                } else {
                    pos.column += 1;
                }
            }
            let lossy = String::from_utf8_lossy(bytes);
            ParseOutcome::rejected(vec![ParseDiagnostic::error(pos, "input is not valid UTF-8", &lossy)])
        }
    }
}
