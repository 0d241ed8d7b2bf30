//! Ontology domain model: IRIs, entities, ontologies and name normalization.
//!
//! Everything here is an immutable value after construction. Entity sets are
//! keyed by [`Iri`] in ordered maps, so equality of two [`Ontology`] values is
//! set equality and iteration order is always deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::OntologyError;
use crate::swrl::SwrlRule;

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";

/// An absolute IRI together with its local name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri {
    value: String,
    local_start: usize,
    local_end: usize,
}

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, OntologyError> {
        let value = value.into();
        let Some(scheme_end) = value.find("://") else {
            return Err(OntologyError::InvalidIri(value));
        };
        if scheme_end == 0 || value.chars().any(|c| c.is_whitespace() || c == '<' || c == '>') {
            return Err(OntologyError::InvalidIri(value));
        }
        let authority_start = scheme_end + 3;
        let (local_start, local_end) = local_name_span(&value, authority_start);
        if local_start >= local_end {
            return Err(OntologyError::InvalidIri(value));
        }
        Ok(Self { value, local_start, local_end })
    }

    pub fn as_str(&self) -> &str {
        &self.value
    }

    /// Fragment after the last `#` or `/`. Trailing separators are skipped, so
    /// `http://ex.org/pd#` has local name `pd`.
    pub fn local_name(&self) -> &str {
        &self.value[self.local_start..self.local_end]
    }

    /// Everything before the local name.
    pub fn namespace(&self) -> &str {
        &self.value[..self.local_start]
    }
}

fn local_name_span(value: &str, authority_start: usize) -> (usize, usize) {
    let trimmed = value.trim_end_matches(['#', '/']);
    let end = trimmed.len().max(authority_start);
    let body = &value[..end];
    let start = body[authority_start..]
        .rfind(['#', '/'])
        .map(|i| authority_start + i + 1)
        .unwrap_or(authority_start);
    (start, end)
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.value)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.value)
    }
}

impl Serialize for Iri {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.value)
    }
}

impl<'de> Deserialize<'de> for Iri {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Iri::new(s).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Iri {
    type Err = OntologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Iri::new(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EntityKind {
    Class,
    ObjectProperty,
}

impl EntityKind {
    pub const ALL: [EntityKind; 2] = [EntityKind::Class, EntityKind::ObjectProperty];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::Class => "class",
            EntityKind::ObjectProperty => "objectProperty",
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EntityKind {
    type Err = OntologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "class" | "classes" => Ok(EntityKind::Class),
            "objprop" | "objectproperty" | "object-property" | "property" => {
                Ok(EntityKind::ObjectProperty)
            }
            _ => Err(OntologyError::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lang: Option<String>,
}

impl Label {
    pub fn new(value: impl Into<String>, lang: Option<&str>) -> Self {
        Self { value: value.into(), lang: lang.map(str::to_string) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Entity {
    pub iri: Iri,
    pub kind: EntityKind,
    #[serde(default)]
    pub labels: Vec<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

impl Entity {
    pub fn new(iri: Iri, kind: EntityKind) -> Self {
        Self { iri, kind, labels: Vec::new(), comment: None }
    }

    pub fn with_label(mut self, value: &str, lang: Option<&str>) -> Self {
        self.labels.push(Label::new(value, lang));
        self
    }

    /// Normalized name: first label that normalizes, else the local name.
    pub fn name(&self) -> NormalizedName {
        self.labels
            .iter()
            .find_map(|l| normalize(&l.value).ok())
            .or_else(|| normalize(self.iri.local_name()).ok())
            .unwrap_or_else(|| {
                normalize(self.iri.as_str()).expect("absolute IRIs contain alphanumerics")
            })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Ontology {
    /// `None` when the document carries no `owl:Ontology` declaration.
    pub ontology_iri: Option<Iri>,
    pub prefixes: BTreeMap<String, String>,
    pub classes: BTreeMap<Iri, Entity>,
    pub object_properties: BTreeMap<Iri, Entity>,
    pub sub_class_edges: BTreeSet<(Iri, Iri)>,
    pub imported_iris: BTreeSet<Iri>,
    #[serde(default)]
    pub rules: Vec<SwrlRule>,
}

impl Ontology {
    pub fn new(ontology_iri: Iri) -> Self {
        Self { ontology_iri: Some(ontology_iri), ..Self::default() }
    }

    /// An ontology with no declaration and no content.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn entities(&self, kind: EntityKind) -> &BTreeMap<Iri, Entity> {
        match kind {
            EntityKind::Class => &self.classes,
            EntityKind::ObjectProperty => &self.object_properties,
        }
    }

    pub fn entities_mut(&mut self, kind: EntityKind) -> &mut BTreeMap<Iri, Entity> {
        match kind {
            EntityKind::Class => &mut self.classes,
            EntityKind::ObjectProperty => &mut self.object_properties,
        }
    }

    /// Inserts or replaces an entity in the set matching its kind.
    pub fn insert(&mut self, entity: Entity) {
        self.entities_mut(entity.kind).insert(entity.iri.clone(), entity);
    }

    pub fn entity_count(&self, kind: EntityKind) -> usize {
        self.entities(kind).len()
    }

    /// True when `iri` is a declared class, `owl:Thing`, or lives under the
    /// namespace of an imported ontology.
    pub fn resolves_class(&self, iri: &Iri) -> bool {
        if self.classes.contains_key(iri) || self.imported_iris.contains(iri) {
            return true;
        }
        if iri.as_str() == format!("{OWL_NS}Thing") {
            return true;
        }
        self.imported_iris.iter().any(|imp| {
            let base = imp.as_str().trim_end_matches(['#', '/']);
            iri.as_str().len() > base.len()
                && iri.as_str().starts_with(base)
                && matches!(iri.as_str().as_bytes()[base.len()], b'#' | b'/')
        })
    }

    /// Checks the structural invariants that the map-based representation
    /// does not already guarantee.
    pub fn validate(&self) -> Result<(), OntologyError> {
        for (child, parent) in &self.sub_class_edges {
            for end in [child, parent] {
                if !self.resolves_class(end) {
                    return Err(OntologyError::DanglingEdge(end.clone()));
                }
            }
        }
        Ok(())
    }
}

/// Comparison key for entity names: ordered lowercase ASCII tokens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalizedName {
    tokens: Vec<String>,
}

impl NormalizedName {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Space-joined tokens; `normalize(render(n)) == n`.
    pub fn render(&self) -> String {
        self.tokens.join(" ")
    }

    /// Tokens concatenated without separators.
    pub fn joined(&self) -> String {
        self.tokens.concat()
    }
}

impl fmt::Display for NormalizedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CharClass {
    Upper,
    Lower,
    Digit,
}

fn classify(c: char) -> Option<CharClass> {
    if c.is_ascii_uppercase() {
        Some(CharClass::Upper)
    } else if c.is_ascii_lowercase() {
        Some(CharClass::Lower)
    } else if c.is_ascii_digit() {
        Some(CharClass::Digit)
    } else {
        None
    }
}

/// Splits a label or local name into lowercase tokens.
///
/// Boundaries are CamelCase transitions (`pdPatient`, and `PDPatient` where an
/// uppercase run is followed by a capitalized word), letter/digit transitions,
/// and every non-alphanumeric character (underscore, hyphen, whitespace and
/// other punctuation). Non-ASCII characters are dropped.
pub fn normalize(name: &str) -> Result<NormalizedName, OntologyError> {
    if name.trim().is_empty() {
        return Err(OntologyError::EmptyName);
    }
    let chars: Vec<char> = name.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut prev: Option<CharClass> = None;

    for (i, &c) in chars.iter().enumerate() {
        let Some(class) = classify(c) else {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            prev = None;
            continue;
        };
        let boundary = match (prev, class) {
            (None, _) => false,
            (Some(CharClass::Lower), CharClass::Upper) => true,
            (Some(CharClass::Digit), CharClass::Upper | CharClass::Lower) => true,
            (Some(CharClass::Upper | CharClass::Lower), CharClass::Digit) => true,
            (Some(CharClass::Upper), CharClass::Upper) => chars
                .get(i + 1)
                .is_some_and(|&next| classify(next) == Some(CharClass::Lower)),
            _ => false,
        };
        if boundary && !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
        current.push(c.to_ascii_lowercase());
        prev = Some(class);
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    if tokens.is_empty() {
        return Err(OntologyError::EmptyName);
    }
    Ok(NormalizedName { tokens })
}

/// Unions `addition` into `base`.
///
/// Entities are keyed by IRI. On collision the base entity keeps its comment
/// and the addition's labels that it lacks are appended. The result keeps the
/// base ontology IRI (falling back to the addition's when base has none).
pub fn merge_ontologies(base: &Ontology, addition: &Ontology) -> Result<Ontology, OntologyError> {
    let mut merged = base.clone();

    for (prefix, ns) in &addition.prefixes {
        match merged.prefixes.get(prefix) {
            Some(existing) if existing != ns => {
                return Err(OntologyError::PrefixConflict {
                    prefix: prefix.clone(),
                    left: existing.clone(),
                    right: ns.clone(),
                });
            }
            Some(_) => {}
            None => {
                merged.prefixes.insert(prefix.clone(), ns.clone());
            }
        }
    }

    if merged.ontology_iri.is_none() {
        merged.ontology_iri = addition.ontology_iri.clone();
    }

    for kind in EntityKind::ALL {
        for (iri, entity) in addition.entities(kind) {
            match merged.entities_mut(kind).get_mut(iri) {
                Some(existing) => {
                    for label in &entity.labels {
                        if !existing.labels.contains(label) {
                            existing.labels.push(label.clone());
                        }
                    }
                    if existing.comment.is_none() {
                        existing.comment = entity.comment.clone();
                    }
                }
                None => {
                    merged.entities_mut(kind).insert(iri.clone(), entity.clone());
                }
            }
        }
    }

    merged.sub_class_edges.extend(addition.sub_class_edges.iter().cloned());
    merged.imported_iris.extend(addition.imported_iris.iter().cloned());
    for rule in &addition.rules {
        if !merged.rules.contains(rule) {
            merged.rules.push(rule.clone());
        }
    }
    Ok(merged)
}

/// One `(iri, name)` pair per declared entity of `kind`, in IRI order.
pub fn entity_names(o: &Ontology, kind: EntityKind) -> Vec<(Iri, NormalizedName)> {
    o.entities(kind).values().map(|e| (e.iri.clone(), e.name())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://ex.org/{s}")).unwrap()
    }

    fn toks(n: &NormalizedName) -> Vec<&str> {
        n.tokens().iter().map(String::as_str).collect()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(toks(&normalize("PDPatient").unwrap()), ["pd", "patient"]);
        assert_eq!(toks(&normalize("pd_patient").unwrap()), ["pd", "patient"]);
        assert_eq!(toks(&normalize("x").unwrap()), ["x"]);
        assert_eq!(normalize("PD Patient").unwrap(), normalize("PDPatient").unwrap());
        assert_eq!(normalize("pd-patient").unwrap(), normalize("PDPatient").unwrap());
    }

    #[test]
    fn normalize_digit_boundaries() {
        assert_eq!(toks(&normalize("GPT4").unwrap()), ["gpt", "4"]);
        assert_eq!(toks(&normalize("Item2b").unwrap()), ["item", "2", "b"]);
        assert_eq!(toks(&normalize("HTTPServer2Go").unwrap()), ["http", "server", "2", "go"]);
    }

    #[test]
    fn normalize_rejects_blank() {
        assert_eq!(normalize("   \t"), Err(OntologyError::EmptyName));
        assert_eq!(normalize(""), Err(OntologyError::EmptyName));
        assert_eq!(normalize("??"), Err(OntologyError::EmptyName));
    }

    #[test]
    fn iri_local_names() {
        assert_eq!(iri("PDPatient").local_name(), "PDPatient");
        let hash = Iri::new("http://ex.org/onto#Gait").unwrap();
        assert_eq!(hash.local_name(), "Gait");
        assert_eq!(hash.namespace(), "http://ex.org/onto#");
        assert_eq!(Iri::new("http://ex.org/pd#").unwrap().local_name(), "pd");
        assert_eq!(Iri::new("http://ex.org").unwrap().local_name(), "ex.org");
        assert!(Iri::new("PDPatient").is_err());
        assert!(Iri::new("http://").is_err());
        assert!(Iri::new("://x").is_err());
    }

    #[test]
    fn entity_names_use_label_first() {
        let mut o = Ontology::new(iri("onto"));
        o.insert(Entity::new(iri("PDPatient"), EntityKind::Class));
        o.insert(Entity::new(iri("GO_01"), EntityKind::Class).with_label("Gait Observation", Some("en")));
        let names = entity_names(&o, EntityKind::Class);
        assert_eq!(names.len(), 2);
        assert_eq!(toks(&names[0].1), ["gait", "observation"]);
        assert_eq!(toks(&names[1].1), ["pd", "patient"]);
        assert!(entity_names(&Ontology::empty(), EntityKind::Class).is_empty());
    }

    #[test]
    fn merge_identity_and_union() {
        let mut a = Ontology::new(iri("a"));
        a.insert(Entity::new(iri("A"), EntityKind::Class));
        let mut b = Ontology::new(iri("b"));
        b.insert(Entity::new(iri("B"), EntityKind::Class));

        assert_eq!(merge_ontologies(&a, &Ontology::empty()).unwrap(), a);
        assert_eq!(merge_ontologies(&a, &a).unwrap(), a);
        let ab = merge_ontologies(&a, &b).unwrap();
        assert_eq!(ab.classes.len(), 2);
        assert_eq!(ab.ontology_iri, a.ontology_iri);
    }

    #[test]
    fn merge_collision_keeps_base_comment_and_appends_labels() {
        let mut base = Ontology::new(iri("a"));
        let mut e = Entity::new(iri("A"), EntityKind::Class).with_label("A", Some("en"));
        e.comment = Some("base".into());
        base.insert(e);
        let mut add = Ontology::new(iri("b"));
        let mut e2 = Entity::new(iri("A"), EntityKind::Class).with_label("Alpha", None);
        e2.comment = Some("addition".into());
        add.insert(e2);

        let m = merge_ontologies(&base, &add).unwrap();
        let merged = &m.classes[&iri("A")];
        assert_eq!(merged.comment.as_deref(), Some("base"));
        assert_eq!(merged.labels.len(), 2);
        assert_eq!(merged.labels[1].value, "Alpha");
    }

    #[test]
    fn merge_prefix_conflict() {
        let mut a = Ontology::empty();
        a.prefixes.insert("ex".into(), "http://ex.org/".into());
        let mut b = Ontology::empty();
        b.prefixes.insert("ex".into(), "http://other.org/".into());
        assert!(matches!(merge_ontologies(&a, &b), Err(OntologyError::PrefixConflict { .. })));
    }

    #[test]
    fn imported_namespace_resolves_edges() {
        let mut o = Ontology::new(iri("onto"));
        o.insert(Entity::new(iri("A"), EntityKind::Class));
        o.imported_iris.insert(Iri::new("http://www.w3.org/ns/sosa/").unwrap());
        let sosa_obs = Iri::new("http://www.w3.org/ns/sosa/Observation").unwrap();
        o.sub_class_edges.insert((iri("A"), sosa_obs));
        assert!(o.validate().is_ok());
        o.sub_class_edges.insert((iri("A"), iri("Missing")));
        assert_eq!(o.validate(), Err(OntologyError::DanglingEdge(iri("Missing"))));
    }
}
