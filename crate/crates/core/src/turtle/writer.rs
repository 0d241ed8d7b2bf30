use std::collections::BTreeMap;
use std::fmt::Write;

use super::RULE_ANNOTATION;
use crate::ontology::{Entity, EntityKind, Iri, Ontology, OWL_NS, RDFS_NS};

/// Compacts IRIs against a prefix map (longest namespace wins, then the
/// smallest prefix name).
pub(crate) struct Compactor<'a> {
    by_ns: Vec<(&'a str, &'a str)>,
}

impl<'a> Compactor<'a> {
    pub(crate) fn new(prefixes: &'a BTreeMap<String, String>) -> Self {
        let mut by_ns: Vec<(&str, &str)> =
            prefixes.iter().map(|(p, ns)| (p.as_str(), ns.as_str())).collect();
        by_ns.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(b.0)));
        Self { by_ns }
    }

    pub(crate) fn compact(&self, iri: &str) -> String {
        for (prefix, ns) in &self.by_ns {
            if let Some(local) = iri.strip_prefix(ns) {
                if is_safe_local(local) && is_safe_prefix(prefix) {
                    return format!("{prefix}:{local}");
                }
            }
        }
        format!("<{iri}>")
    }
}

fn is_safe_prefix(p: &str) -> bool {
    p.is_empty()
        || (p.starts_with(|c: char| c.is_ascii_alphabetic())
            && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-'))
}

fn is_safe_local(l: &str) -> bool {
    !l.is_empty() && l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        && !l.starts_with('-')
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || c == '\u{7f}' => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Deterministic Turtle rendering of the model.
///
/// Prefix directives come first sorted by prefix name, then the ontology
/// header, then one block per class and per object property in IRI order.
/// Only prefixes present in the model are declared; other IRIs are written in
/// full so the output parses back to an equal model.
pub fn serialize_turtle(o: &Ontology) -> String {
    let c = Compactor::new(&o.prefixes);
    let mut out = String::new();

    for (prefix, ns) in &o.prefixes {
        let _ = writeln!(out, "@prefix {prefix}: <{ns}> .");
    }
    if !o.prefixes.is_empty() {
        out.push('\n');
    }

    let owl = |local: &str| c.compact(&format!("{OWL_NS}{local}"));
    let rdfs = |local: &str| c.compact(&format!("{RDFS_NS}{local}"));
    let rule_pred = c.compact(RULE_ANNOTATION);

    let rule_lines: Vec<String> = o
        .rules
        .iter()
        .map(|r| format!("{rule_pred} {}", escape_string(&r.render(&o.prefixes))))
        .collect();

    if let Some(iri) = &o.ontology_iri {
        let mut lines = vec![format!("a {}", owl("Ontology"))];
        lines.extend(o.imported_iris.iter().map(|i| format!("{} {}", owl("imports"), c.compact(i.as_str()))));
        lines.extend(rule_lines);
        write_block(&mut out, &c.compact(iri.as_str()), &lines);
    } else {
        for imp in &o.imported_iris {
            let _ = writeln!(out, "[] {} {} .\n", owl("imports"), c.compact(imp.as_str()));
        }
        if !rule_lines.is_empty() {
            write_block(&mut out, "[]", &rule_lines);
        }
    }

    let mut parents: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
    for (child, parent) in &o.sub_class_edges {
        parents.entry(child).or_default().push(parent);
    }

    for kind in EntityKind::ALL {
        let type_name = match kind {
            EntityKind::Class => owl("Class"),
            EntityKind::ObjectProperty => owl("ObjectProperty"),
        };
        for entity in o.entities(kind).values() {
            let mut lines = vec![format!("a {type_name}")];
            lines.extend(annotation_lines(entity, &rdfs));
            if kind == EntityKind::Class {
                if let Some(ps) = parents.remove(&entity.iri) {
                    let objs: Vec<String> = ps.iter().map(|p| c.compact(p.as_str())).collect();
                    lines.push(format!("{} {}", rdfs("subClassOf"), objs.join(", ")));
                }
            }
            write_block(&mut out, &c.compact(entity.iri.as_str()), &lines);
        }
    }

    // Edges whose child is not a declared class.
    for (child, ps) in parents {
        let objs: Vec<String> = ps.iter().map(|p| c.compact(p.as_str())).collect();
        let lines = vec![format!("{} {}", rdfs("subClassOf"), objs.join(", "))];
        write_block(&mut out, &c.compact(child.as_str()), &lines);
    }
    out
}

fn annotation_lines(entity: &Entity, rdfs: &dyn Fn(&str) -> String) -> Vec<String> {
    let mut lines = Vec::new();
    for label in &entity.labels {
        let mut lit = escape_string(&label.value);
        if let Some(lang) = &label.lang {
            lit.push('@');
            lit.push_str(lang);
        }
        lines.push(format!("{} {lit}", rdfs("label")));
    }
    if let Some(comment) = &entity.comment {
        lines.push(format!("{} {}", rdfs("comment"), escape_string(comment)));
    }
    lines
}

fn write_block(out: &mut String, subject: &str, lines: &[String]) {
    out.push_str(subject);
    for (i, line) in lines.iter().enumerate() {
        out.push_str(if i == 0 { " " } else { " ;\n    " });
        out.push_str(line);
    }
    out.push_str(" .\n\n");
}
