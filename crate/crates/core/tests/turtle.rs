use std::collections::BTreeMap;

use ontowb_core::diagnostics::{last_position, Severity};
use ontowb_core::ontology::{Entity, EntityKind, Iri, Label, Ontology, OWL_NS};
use ontowb_core::swrl::{SwrlAtom, SwrlRule, Term};
use ontowb_core::turtle::{parse_turtle, parse_turtle_bytes, serialize_turtle};
use proptest::prelude::*;

const NAMESPACES: [&str; 4] =
    ["http://ex.org/onto#", "http://ex.org/other/", "http://w3id.org/pd#", "https://unprefixed.example/v1#"];

fn ok(text: &str) -> Ontology {
    let out = parse_turtle(text);
    match out.value {
        Some(o) => o,
        None => panic!("rejected: {:?}\n{text}", out.diagnostics),
    }
}

#[test]
fn minimal_document() {
    let o = ok("@prefix : <http://ex.org/> .\n@prefix owl: <http://www.w3.org/2002/07/owl#> .\n:PDPatient a owl:Class .");
    assert_eq!(o.classes.len(), 1);
    assert!(o.classes.contains_key(&Iri::new("http://ex.org/PDPatient").unwrap()));
}

#[test]
fn undeclared_prefix_is_located() {
    let out = parse_turtle("@prefix owl: <http://www.w3.org/2002/07/owl#> .\n\nfoo:Bar a owl:Class .");
    assert!(out.is_rejected());
    let d = out.errors().next().unwrap();
    assert!(d.message.contains("undeclared prefix"), "{}", d.message);
    assert_eq!((d.line, d.column), (3, 1));
    assert_eq!(d.render("x.ttl"), format!("x.ttl:3:1: error: {}", d.message));
}

#[test]
fn recognized_constructs() {
    let text = r#"
PREFIX owl: <http://www.w3.org/2002/07/owl#>
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix : <http://ex.org/pd#> .
# a comment
<http://ex.org/pd> rdf:type owl:Ontology ; owl:imports <http://www.w3.org/ns/sosa/> .
:Gait a owl:Class ; rdfs:label "Gait"@en, "Marche"@fr ; rdfs:comment """multi
line""" ; rdfs:subClassOf <http://www.w3.org/ns/sosa/ObservableProperty> .
:hasGait a owl:ObjectProperty ; rdfs:domain :Patient .
:Patient a owl:Class ; :opaque [ :x :y ] ; :list ( :a :b ) ; :n 42 , true .
"#;
    let o = ok(text);
    assert_eq!(o.ontology_iri.as_ref().unwrap().as_str(), "http://ex.org/pd");
    assert_eq!(o.classes.len(), 2);
    assert_eq!(o.object_properties.len(), 1);
    let gait = &o.classes[&Iri::new("http://ex.org/pd#Gait").unwrap()];
    assert_eq!(gait.labels, vec![Label::new("Gait", Some("en")), Label::new("Marche", Some("fr"))]);
    assert_eq!(gait.comment.as_deref(), Some("multi\nline"));
    assert_eq!(o.sub_class_edges.len(), 1);
    assert!(o.validate().is_ok());
}

#[test]
fn malformed_documents_are_rejected_with_located_errors() {
    let cases = [
        "@prefix : <http://ex.org/> .\n:A a owl:Class",
        "@prefix : <http://ex.org/> \n:A :b :c .",
        ":A a :B .",
        "@prefix : <http://ex.org/> .\n:A :b \"unterminated .",
        "@prefix : <http://ex.org/> .\n:A :b :c ; ; .\n:D :e",
        "@prefix : <http://ex.org/> .\n<relative> a <http://www.w3.org/2002/07/owl#Class> .",
        "@prefix : <http://ex.org/> .\n:A :b :c .\n}}}",
    ];
    for text in cases {
        let out = parse_turtle(text);
        assert!(out.is_rejected(), "accepted: {text:?}");
        let end = last_position(text);
        for d in out.errors() {
            assert_eq!(d.severity, Severity::Error);
            assert!(d.line >= 1 && d.column >= 1);
            assert!((d.line, d.column) <= (end.line, end.column), "{d:?} outside {text:?}");
            assert!(d.snippet.chars().count() <= 80);
        }
    }
}

#[test]
fn invalid_utf8_is_rejected() {
    let out = parse_turtle_bytes(b"@prefix : <http://ex.org/> .\n:A \xff a :B .");
    assert!(out.is_rejected());
    assert_eq!(out.errors().next().unwrap().line, 2);
}

#[test]
fn rule_annotation_round_trips() {
    let text = r#"@prefix : <http://ex.org/pd#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix ontowb: <http://w3id.org/ontowb/vocab#> .
<http://ex.org/pd> a owl:Ontology ;
    ontowb:swrlRule "Observation(?o) ^ triggers(?o, ?n) -> Alert(?n)" .
"#;
    let o = ok(text);
    assert_eq!(o.rules.len(), 1);
    assert_eq!(o.rules[0].atom_count(), 3);
    assert_eq!(o.rules[0].body[0].predicate.as_str(), "http://ex.org/pd#Observation");
    assert_eq!(ok(&serialize_turtle(&o)), o);

    let bad = text.replace("-> Alert(?n)", "->");
    assert!(parse_turtle(&bad).is_rejected());
}

#[test]
fn empty_ontology_round_trips() {
    for o in [Ontology::empty(), Ontology::new(Iri::new("http://ex.org/o").unwrap())] {
        let text = serialize_turtle(&o);
        assert_eq!(ok(&text), o);
    }
    let text = serialize_turtle(&Ontology::new(Iri::new("http://ex.org/o").unwrap()));
    assert!(text.contains(&format!("<{OWL_NS}Ontology>")));
}

fn arb_iri() -> impl Strategy<Value = Iri> {
    (0..NAMESPACES.len(), "[A-Za-z][A-Za-z0-9_]{0,7}(-[a-z0-9]{1,3})?")
        .prop_map(|(ns, local)| Iri::new(format!("{}{local}", NAMESPACES[ns])).unwrap())
}

fn arb_label() -> impl Strategy<Value = Label> {
    ("\\PC{0,12}|[ -~\t\n\r\"\\\\]{0,12}", proptest::option::of("[a-z]{2}(-[A-Z]{2})?"))
        .prop_map(|(v, lang)| Label { value: v, lang })
}

fn arb_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        "[a-z][a-z0-9_]{0,5}".prop_map(Term::Variable),
        arb_iri().prop_map(Term::Individual),
        "[ -~]{0,8}".prop_map(Term::Literal),
    ]
}

fn arb_atom() -> impl Strategy<Value = SwrlAtom> {
    (arb_iri(), proptest::collection::vec(arb_term(), 1..=2)).prop_map(|(predicate, args)| SwrlAtom { predicate, args })
}

/// Rules are made safe by giving every head variable a body occurrence.
fn arb_rule() -> impl Strategy<Value = SwrlRule> {
    (proptest::collection::vec(arb_atom(), 0..4), proptest::collection::vec(arb_atom(), 1..3)).prop_map(
        |(mut body, head)| {
            for atom in &head {
                for t in &atom.args {
                    if let Term::Variable(v) = t {
                        let bound = body.iter().flat_map(|a: &SwrlAtom| &a.args).any(|b| b == t);
                        if !bound {
                            body.push(SwrlAtom {
                                predicate: Iri::new("http://ex.org/onto#Bound").unwrap(),
                                args: vec![Term::Variable(v.clone())],
                            });
                        }
                    }
                }
            }
            SwrlRule { body, head }
        },
    )
}

fn arb_entity(kind: EntityKind) -> impl Strategy<Value = Entity> {
    (arb_iri(), proptest::collection::vec(arb_label(), 0..3), proptest::option::of("\\PC{0,20}")).prop_map(
        move |(iri, labels, comment)| {
            let mut e = Entity::new(iri, kind);
            for l in labels {
                if !e.labels.contains(&l) {
                    e.labels.push(l);
                }
            }
            e.comment = comment;
            e
        },
    )
}

prop_compose! {
    fn arb_ontology()(
        iri in proptest::option::of(arb_iri()),
        prefix_mask in proptest::collection::vec(any::<bool>(), 4),
        with_owl in any::<bool>(),
        classes in proptest::collection::vec(arb_entity(EntityKind::Class), 0..8),
        props in proptest::collection::vec(arb_entity(EntityKind::ObjectProperty), 0..5),
        imports in proptest::collection::btree_set(arb_iri(), 0..3),
        edge_picks in proptest::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>(), any::<bool>()), 0..8),
        rules in proptest::collection::vec(arb_rule(), 0..3),
    ) -> Ontology {
        let mut prefixes = BTreeMap::new();
        let names = ["", "ex", "pd", "u"];
        for (i, keep) in prefix_mask.into_iter().enumerate() {
            if keep && i < 3 {
                prefixes.insert(names[i].to_string(), NAMESPACES[i].to_string());
            }
        }
        if with_owl {
            prefixes.insert("owl".into(), OWL_NS.into());
        }
        let mut o = Ontology { ontology_iri: iri, prefixes, imported_iris: imports, rules, ..Ontology::default() };
        for c in classes {
            o.insert(c);
        }
        // Class and property IRIs are kept disjoint: the model stores labels
        // per entity while Turtle attaches them to the IRI.
        for p in props {
            if !o.classes.contains_key(&p.iri) {
                o.insert(p);
            }
        }
        let class_iris: Vec<Iri> = o.classes.keys().cloned().collect();
        let imported: Vec<Iri> = o.imported_iris.iter().cloned().collect();
        if !class_iris.is_empty() {
            for (a, b, to_import) in edge_picks {
                let child = a.get(&class_iris).clone();
                let parent = if to_import && !imported.is_empty() { b.get(&imported).clone() } else { b.get(&class_iris).clone() };
                o.sub_class_edges.insert((child, parent));
            }
        }
        o
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn round_trip(o in arb_ontology()) {
        let text = serialize_turtle(&o);
        let out = parse_turtle(&text);
        prop_assert!(!out.is_rejected(), "{:?}\n{}", out.diagnostics, text);
        prop_assert_eq!(out.value.unwrap(), o.clone());
        prop_assert_eq!(serialize_turtle(&o), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn never_panics_on_arbitrary_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let out = parse_turtle_bytes(&bytes);
        if out.is_rejected() {
            prop_assert!(out.errors().next().is_some());
            prop_assert!(out.errors().all(|d| d.line >= 1 && d.column >= 1));
        }
    }

    #[test]
    fn never_panics_on_turtle_like_text(text in "[@a-zA-Z:<>/#. ;,\"'()\\[\\]_\\n0-9^-]{0,120}") {
        let full = format!("@prefix : <http://ex.org/> .\n{text}");
        let out = parse_turtle(&full);
        let end = last_position(&full);
        if out.is_rejected() {
            prop_assert!(out.errors().next().is_some());
        }
        for d in &out.diagnostics {
            prop_assert!(d.line >= 1 && d.column >= 1);
            prop_assert!((d.line, d.column) <= (end.line, end.column), "{:?} outside {:?}", d, full);
        }
    }
}
