//! Regenerates the bundled fixtures under `fixtures/`.
//!
//! No transcripts of the original model runs are available, so every reply
//! here is synthesized: each generated ontology is assembled from gold class
//! names (true positives) and out-of-gold domain names (false positives) in
//! the published proportions, then played through the real workflow engine
//! with a scripted provider while the cassette records. Every count is
//! checked against the alignment engine before anything is written.
//!
//! ```text
//! cargo run -p ontowb-cli --example synthesize_fixtures [-- <fixtures dir>]
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use chrono::{DateTime, Utc};
use ontowb_cli::commands::drive;
use ontowb_cli::inputs::{HumanInputSpec, OntologySource, Script};
use ontowb_core::align::{align, AlignmentConfig, ReviewDecision, Verdict};
use ontowb_core::ontology::{normalize, Entity, EntityKind, Iri, Ontology};
use ontowb_core::swrl::{compare_rules, parse_swrl_with, SwrlContext};
use ontowb_core::turtle::{parse_turtle, serialize_turtle};
use ontowb_llm::prompts::{pd_bindings, PD_AIM, PD_REQUIREMENTS, PD_SCOPE};
use ontowb_llm::provider::ScriptedProvider;
use ontowb_llm::{Cassette, CassetteMode, Engine, Gateway, LogicalClock, Methodology, Supervision, WorkflowSession};
use serde_json::json;

const GOLD_IRI: &str = "http://w3id.org/ontowb/pd";
const GOLD_NS: &str = "http://w3id.org/ontowb/pd#";

/// Local name, label, parent.
const GOLD_CLASSES: &[(&str, &str, Option<&str>)] = &[
    ("Person", "person", None),
    ("Patient", "patient", Some("Person")),
    ("PDPatient", "PD patient", Some("Patient")),
    ("Clinician", "clinician", Some("Person")),
    ("Caregiver", "caregiver", Some("Person")),
    ("Disease", "disease", None),
    ("ParkinsonsDisease", "Parkinsons disease", Some("Disease")),
    ("DiseaseSeverity", "disease severity", None),
    ("HoehnAndYahrStage", "Hoehn and Yahr stage", Some("DiseaseSeverity")),
    ("Symptom", "symptom", None),
    ("MotorSymptom", "motor symptom", Some("Symptom")),
    ("NonMotorSymptom", "non-motor symptom", Some("Symptom")),
    ("Tremor", "tremor", Some("MotorSymptom")),
    ("Bradykinesia", "bradykinesia", Some("MotorSymptom")),
    ("BradykinesiaOfUpperLimb", "bradykinesia of upper limb", Some("Bradykinesia")),
    ("Dyskinesia", "dyskinesia", Some("MotorSymptom")),
    ("FreezingOfGait", "freezing of gait", Some("MotorSymptom")),
    ("Gait", "gait", None),
    ("Activity", "activity", None),
    ("ActivityOfDailyLiving", "activity of daily living", Some("Activity")),
    ("Observation", "observation", None),
    ("MovementObservation", "movement observation", Some("Observation")),
    ("PDpatientMissingDoseEventObservation", "PD patient missing dose event observation", Some("Observation")),
    ("PatientFallEventObservation", "patient fall event observation", Some("Observation")),
    ("Event", "event", None),
    ("Notification", "notification", None),
    ("MissingDoseNotification", "missing dose notification", Some("Notification")),
    ("FallNotification", "fall notification", Some("Notification")),
    ("Device", "device", None),
    ("WearableDevice", "wearable device", Some("Device")),
    ("Sensor", "sensor", Some("Device")),
    ("Accelerometer", "accelerometer", Some("Sensor")),
    ("Gyroscope", "gyroscope", Some("Sensor")),
    ("Smartwatch", "smartwatch", Some("WearableDevice")),
    ("Medication", "medication", None),
    ("MedicationDosing", "medication dosing", Some("Event")),
    ("PersonalHealthRecord", "personal health record", None),
    ("HealthApplication", "health application", None),
    ("SleepDisorder", "sleep disorder", Some("NonMotorSymptom")),
    ("ObservableProperty", "observable property", None),
    ("HealthcareTeam", "healthcare team", None),
];

const GOLD_PROPERTIES: &[(&str, &str)] = &[
    ("observedProperty", "observed property"),
    ("isAfterDosing", "is after dosing"),
    ("triggers", "triggers"),
    ("hasObservation", "has observation"),
    ("hasSymptom", "has symptom"),
    ("hasDisease", "has disease"),
    ("hasSeverity", "has severity"),
    ("hasCaregiver", "has caregiver"),
    ("treatedBy", "treated by"),
    ("memberOf", "member of"),
    ("wears", "wears"),
    ("hasSensor", "has sensor"),
    ("madeBySensor", "made by sensor"),
    ("takesMedication", "takes medication"),
    ("hasDosing", "has dosing"),
    ("hasHealthRecord", "has health record"),
];

/// Domain concepts absent from the gold ontology. None reaches the default
/// similarity threshold against a gold name.
const FP_POOL: &[&str] = &[
    "Rigidity", "SurgicalIntervention", "CognitiveImpairment", "DeepBrainStimulation", "Levodopa",
    "Neurologist", "Appointment", "Exercise", "PosturalInstability", "SpeechDisorder",
    "Depression", "Anxiety", "Hallucination", "Constipation", "Fatigue",
    "SmellLoss", "BalanceTest", "Questionnaire", "UPDRSScore", "ClinicalTrial",
    "Prescription", "SideEffect", "Physiotherapy", "HomeEnvironment", "TimeInterval",
    "Reminder", "EmergencyContact", "FamilyMember", "Hospitalization", "HeartRate",
    "BloodPressure", "StepCount", "Posture", "Handwriting", "VoiceRecording",
    "Dementia", "Hospital", "DopamineAgonist", "TreatmentPlan", "RiskFactor",
];

const GOLD_RULE: &str = "Observation(?o) ^ observedProperty(?o, ?p) ^ BradykinesiaOfUpperLimb(?p) ^ isAfterDosing(?o, ?d) ^ MedicationDosing(?d) ^ triggers(?o, ?n) -> MissingDoseNotification(?n) ^ PDpatientMissingDoseEventObservation(?o)";

/// The natural-language rule given to every model in the rule experiment.
const NL_RULE: &str = "If an observation indicates that there is bradykinesia of the upper limb (indicating slow movement) and this observation pertains to the property and the observation is made after medication dosing, then a notification should be sent indicating a <MissingDoseNotification> and this observation should be marked as a <PDpatientMissingDoseEventObservation>.";

const COMPETENCY_QUESTIONS: &[&str] = &[
    "Which wearable sensors record the movement data of a PD patient?",
    "Which observations indicate bradykinesia of the upper limb?",
    "Which notification is sent when a medication dose is missed?",
    "What is the disease severity stage of a patient?",
];

const REVIEWER: &str = "domain-expert-1";

struct Model {
    slug: &'static str,
    provider: &'static str,
    model: &'static str,
}

const CHATGPT35: Model = Model { slug: "chatgpt35", provider: "openai", model: "gpt-3.5-turbo" };
const CHATGPT4: Model = Model { slug: "chatgpt4", provider: "openai", model: "gpt-4" };
const BARD: Model = Model { slug: "bard", provider: "bard", model: "bard" };
const LLAMA2: Model = Model { slug: "llama2", provider: "llama2", model: "llama-2-70b-chat" };
const GEMINI: Model = Model { slug: "gemini", provider: "gemini", model: "gemini-pro" };
const CLAUDE: Model = Model { slug: "claude", provider: "anthropic", model: "claude-3-opus" };

/// Class-evaluation row: methodology, true positives, false positives and,
/// for X-HCOME rows, the number of false positives the reviewer reclassifies.
struct Row {
    model: Model,
    method: Methodology,
    tp: usize,
    fp: usize,
    reclassified: usize,
}

fn generation_rows() -> Vec<Row> {
    use Methodology::*;
    let r = |model, method, tp, fp, reclassified| Row { model, method, tp, fp, reclassified };
    vec![
        r(CHATGPT35, ChainOfThought, 2, 1, 0),
        r(CHATGPT35, OneShot, 2, 3, 0),
        r(CHATGPT35, XHcome, 10, 15, 13),
        r(CHATGPT4, ChainOfThought, 4, 2, 0),
        r(CHATGPT4, OneShot, 5, 4, 0),
        r(CHATGPT4, XHcome, 10, 23, 19),
        r(BARD, ChainOfThought, 5, 3, 0),
        r(BARD, OneShot, 1, 12, 0),
        r(BARD, XHcome, 19, 31, 31),
        r(LLAMA2, ChainOfThought, 3, 0, 0),
        r(LLAMA2, OneShot, 2, 0, 0),
        r(LLAMA2, XHcome, 4, 28, 22),
    ]
}

/// SimX-HCOME+ rows with the supervision issued after each round; the last
/// decision is always `Stop`.
fn supervised_rows() -> Vec<(Row, Vec<Supervision>, &'static str)> {
    let r = |model, tp, fp| Row { model, method: Methodology::SimXHcomePlus, tp, fp, reclassified: 0 };
    let guide = |t: &str| Supervision::InjectGuidance(t.into());
    vec![
        (r(CHATGPT4, 9, 8), vec![Supervision::Continue, Supervision::Stop], CHATGPT4_RULE),
        (
            r(CHATGPT35, 14, 7),
            vec![Supervision::Continue, guide("Reuse the observation pattern for sensor readings."), Supervision::Stop],
            CHATGPT35_RULE,
        ),
        (
            r(GEMINI, 15, 7),
            vec![guide("Model gait and activities of daily living in more detail."), Supervision::Continue, Supervision::Stop],
            GEMINI_RULE,
        ),
        (r(CLAUDE, 12, 12), vec![guide("Add the notification classes."), Supervision::Stop], CLAUDE_RULE),
    ]
}

const CHATGPT4_RULE: &str = "PDPatient(?patient) ^ hasObservation(?patient, ?obs) ^ Observation(?obs) ^ hasSymptom(?obs, ?sym) ^ Bradykinesia(?sym) ^ affectsBodyPart(?sym, ?limb) ^ UpperLimb(?limb) ^ hasTimestamp(?obs, ?t) ^ MedicationDosing(?dose) ^ hasDoseTime(?dose, ?dt) ^ swrlb:greaterThan(?t, ?dt) -> MissingDoseNotification(?obs) ^ sendAlert(?obs, ?patient)";
const CHATGPT35_RULE: &str = "Observation(?o) ^ hasPatient(?o, ?pat) ^ PDPatient(?pat) ^ hasSymptom(?o, ?sym) ^ Bradykinesia(?sym) ^ hasLocation(?sym, ?loc) ^ UpperLimb(?loc) ^ hasObservationTime(?o, ?t1) ^ MedicationDosing(?med) ^ takesMedication(?pat, ?med) ^ hasDosingTime(?med, ?t2) ^ swrlb:greaterThan(?t1, ?t2) ^ SlowMovement(?sym) -> MissingDoseNotification(?o) ^ MissingDoseEventObservation(?o) ^ sendNotification(?pat, ?o) ^ hasAlertStatus(?o, \"true\")";
const CLAUDE_RULE: &str = "PDPatient(?p) ^ hasObservation(?p, ?obs) ^ Observation(?obs) ^ observedProperty(?obs, ?prop) ^ BradykinesiaOfUpperLimb(?prop) ^ takenAfter(?obs, ?dose) ^ MedicationDose(?dose) ^ hasSeverity(?obs, ?s) ^ SevereLevel(?s) -> MissingDoseNotification(?obs) ^ PDpatientMissingDoseEventObservation(?obs) ^ notifies(?obs, ?p)";
const GEMINI_RULE: &str = "BradykinesiaOfUpperLimb(?x) ^ afterDose(?x, -> MissingDoseNotification(?x)";

fn method_slug(m: Methodology) -> &'static str {
    match m {
        Methodology::OneShot => "os",
        Methodology::ChainOfThought => "cot",
        Methodology::XHcome => "xhcome",
        Methodology::SimXHcomePlus => "simx",
    }
}

fn iri(s: &str) -> Iri {
    Iri::new(s).expect("fixture IRIs are absolute")
}

fn label_for(local: &str) -> String {
    let text = normalize(local).expect("fixture names normalize").render();
    let mut chars = text.chars();
    chars.next().map(|c| c.to_ascii_uppercase().to_string() + chars.as_str()).unwrap_or_default()
}

fn gold_ontology(ontology_iri: &str) -> Result<Ontology> {
    let mut o = Ontology::new(iri(ontology_iri));
    o.prefixes = BTreeMap::from([
        (String::new(), GOLD_NS.to_string()),
        ("owl".into(), "http://www.w3.org/2002/07/owl#".into()),
        ("rdfs".into(), "http://www.w3.org/2000/01/rdf-schema#".into()),
    ]);
    for (local, label, parent) in GOLD_CLASSES {
        o.insert(Entity::new(iri(&format!("{GOLD_NS}{local}")), EntityKind::Class).with_label(label, Some("en")));
        if let Some(p) = parent {
            o.sub_class_edges.insert((iri(&format!("{GOLD_NS}{local}")), iri(&format!("{GOLD_NS}{p}"))));
        }
    }
    for (local, label) in GOLD_PROPERTIES {
        o.insert(Entity::new(iri(&format!("{GOLD_NS}{local}")), EntityKind::ObjectProperty).with_label(label, Some("en")));
    }
    let ctx = SwrlContext::with_prefixes(o.prefixes.clone());
    let rule = parse_swrl_with(GOLD_RULE, &ctx).into_result().map_err(|d| anyhow::anyhow!("gold rule: {d:?}"))?;
    o.rules.push(rule);
    Ok(o)
}

/// Entity choices for one generated ontology.
struct Selection {
    tp: Vec<&'static str>,
    fp: Vec<&'static str>,
}

fn select(index: usize, tp: usize, fp: usize) -> Selection {
    let start = (index * 7) % GOLD_CLASSES.len();
    let tp = (0..tp).map(|i| GOLD_CLASSES[(start + i) % GOLD_CLASSES.len()].0).collect();
    let fp_start = (index * 5) % FP_POOL.len();
    let fp = (0..fp).map(|i| FP_POOL[(fp_start + i) % FP_POOL.len()]).collect();
    Selection { tp, fp }
}

fn generated_ns(m: &Model, method: Methodology) -> String {
    format!("http://llm.example.org/{}/{}#", m.slug, method_slug(method))
}

/// A generated ontology with gold labels on reused names and the gold
/// hierarchy among them.
fn generated_ontology(ns: &str, tp: &[&str], fp: &[&str], properties: &[&str]) -> Ontology {
    let mut o = Ontology::new(iri(ns.trim_end_matches('#')));
    o.prefixes = BTreeMap::from([
        (String::new(), ns.to_string()),
        ("owl".into(), "http://www.w3.org/2002/07/owl#".into()),
        ("rdfs".into(), "http://www.w3.org/2000/01/rdf-schema#".into()),
    ]);
    for local in tp {
        let (_, label, _) = GOLD_CLASSES.iter().find(|(l, _, _)| l == local).expect("gold name");
        o.insert(Entity::new(iri(&format!("{ns}{local}")), EntityKind::Class).with_label(label, Some("en")));
    }
    for local in fp {
        o.insert(Entity::new(iri(&format!("{ns}{local}")), EntityKind::Class).with_label(&label_for(local), Some("en")));
    }
    for (local, _, parent) in GOLD_CLASSES {
        if let Some(p) = parent {
            if tp.contains(local) && tp.contains(p) {
                o.sub_class_edges.insert((iri(&format!("{ns}{local}")), iri(&format!("{ns}{p}"))));
            }
        }
    }
    for local in properties {
        let label = GOLD_PROPERTIES.iter().find(|(l, _)| l == local).map(|(_, l)| l.to_string());
        let label = label.unwrap_or_else(|| label_for(local));
        o.insert(Entity::new(iri(&format!("{ns}{local}")), EntityKind::ObjectProperty).with_label(&label, Some("en")));
    }
    o
}

fn ontology_reply(o: &Ontology) -> String {
    format!("Here is the ontology in Turtle.\n\n```turtle\n{}```\n", serialize_turtle(o))
}

fn check_counts(o: &Ontology, gold: &Ontology, tp: usize, fp: usize, what: &str) -> Result<()> {
    let report = align(o, gold, EntityKind::Class, &AlignmentConfig::default());
    ensure!(
        report.true_positives.len() == tp && report.false_positives.len() == fp,
        "{what}: expected TP={tp} FP={fp}, got TP={} FP={}",
        report.true_positives.len(),
        report.false_positives.len()
    );
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text).with_context(|| path.display().to_string())
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    write(path, &(serde_json::to_string_pretty(value)? + "\n"))
}

/// Plays `responses` through the workflow engine, recording the cassette.
fn record(
    dir: &Path,
    cassette: &str,
    m: &Model,
    method: Methodology,
    responses: Vec<String>,
    script: Option<&str>,
    nl_rule: bool,
) -> Result<WorkflowSession> {
    let path = dir.join("cassettes").join(cassette);
    if path.exists() {
        fs::remove_file(&path)?;
    }
    let gw = Gateway::isolated(Cassette::open(&path, CassetteMode::Record)?);
    gw.register(m.provider, Box::new(ScriptedProvider::new(responses)));
    let clock = LogicalClock::default();
    let engine = Engine::new(&gw, &clock);
    let mut s = WorkflowSession::new("synthesis", method, m.provider, m.model, pd_bindings(), &clock);
    let (script, base) = match script {
        Some(name) => {
            let p = dir.join("scripts").join(name);
            (serde_json::from_slice::<Script>(&fs::read(&p)?)?, p.parent().expect("script dir").to_path_buf())
        }
        None => (Script::default(), PathBuf::new()),
    };
    drive(&engine, &mut s, script, &base).map_err(|e| anyhow::anyhow!("{cassette}: {}", e.message))?;
    if nl_rule {
        engine.nl2swrl(&mut s, NL_RULE)?;
    }
    Ok(s)
}

fn decisions(ns: &str, fp: &[&str], n: usize) -> Vec<ReviewDecision> {
    let timestamp: DateTime<Utc> = "2024-03-01T10:00:00Z".parse().expect("timestamp");
    fp.iter()
        .take(n)
        .map(|local| ReviewDecision {
            generated_iri: iri(&format!("{ns}{local}")),
            verdict: Verdict::ReclassifyToTP,
            rationale: format!("{} is a valid domain concept missing from the gold ontology", label_for(local)),
            reviewer: REVIEWER.into(),
            timestamp,
        })
        .collect()
}

fn main() -> Result<()> {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"));
    fs::create_dir_all(&dir)?;

    let gold = gold_ontology(GOLD_IRI)?;
    ensure!(gold.classes.len() == 41 && gold.rules[0].atom_count() == 8, "gold shape");
    let gold_ttl = serialize_turtle(&gold);
    ensure!(parse_turtle(&gold_ttl).into_result().ok().as_ref() == Some(&gold), "gold round trip");
    write(&dir.join("gold/pd-gold.ttl"), &gold_ttl)?;
    write(&dir.join("gold/gold-rule.swrl"), &format!("{GOLD_RULE}\n"))?;
    write(&dir.join("gold/nl-rule.txt"), &format!("{NL_RULE}\n"))?;
    write(&dir.join("lint/pd-gold-owl-suffix.ttl"), &serialize_turtle(&gold_ontology(&format!("{GOLD_IRI}.owl"))?))?;

    let mut manifest_rows = Vec::new();
    let properties = ["observedProperty", "hasObservation", "hasSymptom", "hasSideEffect"];

    for (index, row) in generation_rows().into_iter().enumerate() {
        let m = &row.model;
        let slug = format!("{}-{}", m.slug, method_slug(row.method));
        let ns = generated_ns(m, row.method);
        let sel = select(index, row.tp, row.fp);
        let full = generated_ontology(&ns, &sel.tp, &sel.fp, &properties);
        check_counts(&full, &gold, row.tp, row.fp, &slug)?;
        let cassette = format!("{slug}.jsonl");
        let session = match row.method {
            Methodology::OneShot => record(&dir, &cassette, m, row.method, vec![ontology_reply(&full)], None, false)?,
            Methodology::ChainOfThought => {
                let first = "The domain covers patients, their symptoms, wearable sensors and the observations they produce. \
                             I will list these concepts first and then write the ontology."
                    .to_string();
                record(&dir, &cassette, m, row.method, vec![first, ontology_reply(&full)], None, false)?
            }
            Methodology::XHcome => {
                let (tp_gen, tp_rev) = sel.tp.split_at(row.tp / 2);
                let (fp_gen, fp_rev) = sel.fp.split_at(row.fp / 2);
                let step2 = generated_ontology(&ns, tp_gen, fp_gen, &properties[..2]);
                let revision = generated_ontology(&ns, tp_rev, fp_rev, &properties[2..]);
                let revision_file = format!("{slug}-revision.ttl");
                write(&dir.join("revisions").join(&revision_file), &serialize_turtle(&revision))?;
                let script = Script {
                    human_inputs: vec![
                        HumanInputSpec::Requirements {
                            scope: PD_SCOPE.into(),
                            aim: PD_AIM.into(),
                            requirements: PD_REQUIREMENTS.into(),
                            competency_questions: COMPETENCY_QUESTIONS.iter().map(|q| q.to_string()).collect(),
                        },
                        HumanInputSpec::AlignmentReview {
                            gold: OntologySource::Path { path: "../gold/pd-gold.ttl".into() },
                            config: None,
                        },
                        HumanInputSpec::Revision {
                            ontology: OntologySource::Path { path: format!("../revisions/{revision_file}").into() },
                        },
                        HumanInputSpec::Evaluation { notes: "Structure reviewed; no cycles found.".into() },
                    ],
                    supervision: Vec::new(),
                };
                let script_file = format!("{slug}.json");
                write_json(&dir.join("scripts").join(&script_file), &script)?;
                let responses = vec![
                    ontology_reply(&step2),
                    "Several generated classes have exact counterparts in the gold ontology; the remaining ones \
                     describe treatments and clinical context that the gold ontology does not cover."
                        .to_string(),
                    "The merged ontology keeps the gold naming for shared classes. Consider adding labels in a \
                     second language."
                        .to_string(),
                ];
                let s = record(&dir, &cassette, m, row.method, responses, Some(&script_file), false)?;
                write_json(
                    &dir.join("decisions").join(format!("{slug}.json")),
                    &decisions(&ns, &sel.fp, row.reclassified),
                )?;
                s
            }
            Methodology::SimXHcomePlus => unreachable!("not a class-evaluation row"),
        };
        let produced = session.final_ontology().context("no ontology produced")?;
        ensure!(produced.classes == full.classes, "{slug}: replayed classes differ");
        write(&dir.join("generated").join(format!("{slug}.ttl")), &serialize_turtle(produced))?;
        manifest_rows.push(json!({
            "id": slug,
            "table": "class-evaluation",
            "provider": m.provider,
            "model": m.model,
            "methodology": row.method,
            "ontology": format!("generated/{slug}.ttl"),
            "cassette": format!("cassettes/{cassette}"),
            "script": (row.method == Methodology::XHcome).then(|| format!("scripts/{slug}.json")),
            "decisions": (row.method == Methodology::XHcome).then(|| format!("decisions/{slug}.json")),
            "reclassified": row.reclassified,
            "tp": row.tp,
            "fp": row.fp,
        }));
    }

    let gold_rule = gold.rules[0].clone();
    for (index, (row, supervision, rule)) in supervised_rows().into_iter().enumerate() {
        let m = &row.model;
        let slug = format!("{}-simx", m.slug);
        let ns = generated_ns(m, row.method);
        let sel = select(20 + index, row.tp, row.fp);
        let rounds = supervision.len();
        let mut responses = Vec::new();
        for round in 1..=rounds {
            let tp = &sel.tp[..row.tp * round / rounds];
            let fp = &sel.fp[..row.fp * round / rounds];
            responses.push(format!("KW: round {round} needs the patient, symptom and sensor concepts covered."));
            responses.push(format!("DE: in round {round} the medication and notification concepts matter most."));
            responses.push(ontology_reply(&generated_ontology(&ns, tp, fp, &properties)));
        }
        responses.push(format!("Here is the SWRL rule:\n\n{rule}\n"));
        let script_file = format!("{slug}.json");
        write_json(&dir.join("scripts").join(&script_file), &Script { human_inputs: Vec::new(), supervision })?;
        let cassette = format!("{slug}.jsonl");
        let s = record(&dir, &cassette, m, row.method, responses, Some(&script_file), true)?;
        let produced = s.final_ontology().context("no ontology produced")?;
        check_counts(produced, &gold, row.tp, row.fp, &slug)?;
        write(&dir.join("supervised").join(format!("{slug}.ttl")), &serialize_turtle(produced))?;
        let reply = format!("Here is the SWRL rule:\n\n{rule}\n");
        write(&dir.join("rules").join(format!("{}.reply.txt", m.slug)), &reply)?;
        let comparison = match s.rule_outcome() {
            Some(Some(candidate)) => {
                let c = compare_rules(candidate, &gold_rule, None);
                json!({ "atoms": candidate.atom_count(), "tpSC": c.tp_sc, "tpLC": c.tp_lc, "fpSC": c.fp_sc, "fpLC": c.fp_lc, "fnSC": c.fn_sc, "fnLC": c.fn_lc })
            }
            _ => json!({ "rejected": true }),
        };
        manifest_rows.push(json!({
            "id": slug,
            "table": "simx-evaluation",
            "provider": m.provider,
            "model": m.model,
            "methodology": row.method,
            "rounds": rounds,
            "ontology": format!("supervised/{slug}.ttl"),
            "cassette": format!("cassettes/{cassette}"),
            "script": format!("scripts/{script_file}"),
            "ruleReply": format!("rules/{}.reply.txt", m.slug),
            "ruleComparison": comparison,
            "tp": row.tp,
            "fp": row.fp,
        }));
    }

    // A reply the Turtle extractor cannot accept.
    let broken = Model { slug: "malformed", provider: "llama2", model: "llama-2-7b-chat" };
    record(
        &dir,
        "malformed-os.jsonl",
        &broken,
        Methodology::OneShot,
        vec!["```turtle\n@prefix : <http://llm.example.org/broken#> .\n:Patient a owl:Class ;\n  rdfs:label \"patient\n```\n".into()],
        None,
        false,
    )?;

    let manifest = json!({
        "schemaVersion": 1,
        "provenance": "Synthesized. No model transcripts are available, so every LLM reply in these fixtures was \
                       written by synthesize_fixtures.rs to reproduce the published entity counts and recorded \
                       through the workflow engine. Entity names are illustrative; only the counts are reproduced.",
        "regenerate": "cargo run -p ontowb-cli --example synthesize_fixtures",
        "gold": {
            "ontology": "gold/pd-gold.ttl",
            "rule": "gold/gold-rule.swrl",
            "nlRule": "gold/nl-rule.txt",
            "classes": gold.classes.len(),
            "objectProperties": gold.object_properties.len(),
            "ruleAtoms": gold_rule.atom_count(),
            "lintFindings": ontowb_core::lint::lint(&gold),
        },
        "lint": { "owlSuffixed": "lint/pd-gold-owl-suffix.ttl", "expected": ["P36"] },
        "malformed": { "cassette": "cassettes/malformed-os.jsonl", "provider": "llama2", "model": "llama-2-7b-chat" },
        "notes": [
            "Rule-experiment recall and F1 are computed from the counts with the standard formulas; the published \
             recall and F1 cells for that experiment do not follow from its own counts.",
            "Expected percentages round half-up; published SimX percentages are truncated and differ by one point \
             in a few cells.",
        ],
        "rows": manifest_rows,
    });
    write_json(&dir.join("manifest.json"), &manifest)?;
    println!("fixtures written to {}", dir.display());
    Ok(())
}
