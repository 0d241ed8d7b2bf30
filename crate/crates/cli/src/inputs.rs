//! Human input as written in script files and API bodies. Ontologies are
//! given inline as Turtle or, in script files only, as a path.

use std::path::{Path, PathBuf};

use ontowb_core::align::AlignmentConfig;
use ontowb_core::diagnostics::ParseDiagnostic;
use ontowb_core::ontology::Ontology;
use ontowb_core::turtle::parse_turtle;
use ontowb_llm::{HumanInput, Supervision};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("ontology paths are not accepted here; send the Turtle text")]
    PathNotAllowed,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}: invalid Turtle ({})", .diagnostics.first().map(|d| format!("{}:{}: {}", d.line, d.column, d.message)).unwrap_or_default())]
    Turtle { origin: String, diagnostics: Vec<ParseDiagnostic> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OntologySource {
    Turtle { turtle: String },
    Path { path: PathBuf },
}

impl OntologySource {
    /// Relative paths resolve against `base`; `base = None` forbids paths.
    pub fn load(&self, base: Option<&Path>) -> Result<Ontology, InputError> {
        let (text, origin) = match (self, base) {
            (OntologySource::Turtle { turtle }, _) => (turtle.clone(), "inline Turtle".to_string()),
            (OntologySource::Path { .. }, None) => return Err(InputError::PathNotAllowed),
            (OntologySource::Path { path }, Some(base)) => {
                let full = base.join(path);
                let text = std::fs::read_to_string(&full).map_err(|source| InputError::Io { path: full.clone(), source })?;
                (text, full.display().to_string())
            }
        };
        parse_turtle(&text).into_result().map_err(|diagnostics| InputError::Turtle { origin, diagnostics })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", rename_all_fields = "camelCase", deny_unknown_fields)]
pub enum HumanInputSpec {
    Requirements { scope: String, aim: String, requirements: String, competency_questions: Vec<String> },
    AlignmentReview { gold: OntologySource, #[serde(default)] config: Option<AlignmentConfig> },
    Revision { ontology: OntologySource },
    Evaluation { #[serde(default)] notes: String },
}

impl HumanInputSpec {
    pub fn resolve(self, base: Option<&Path>) -> Result<HumanInput, InputError> {
        Ok(match self {
            HumanInputSpec::Requirements { scope, aim, requirements, competency_questions } => {
                HumanInput::Requirements { scope, aim, requirements, competency_questions }
            }
            HumanInputSpec::AlignmentReview { gold, config } => {
                HumanInput::AlignmentReview { gold: gold.load(base)?, config }
            }
            HumanInputSpec::Revision { ontology } => HumanInput::Revision { ontology: ontology.load(base)? },
            HumanInputSpec::Evaluation { notes } => HumanInput::Evaluation { notes },
        })
    }
}

/// Scripted human side of a `generate` run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Script {
    /// X-HCOME inputs for steps 1, 3, 5 and 7, in order.
    #[serde(default)]
    pub human_inputs: Vec<HumanInputSpec>,
    /// SimX-HCOME+ decisions after each round, in order. When exhausted the
    /// run continues until the round cap.
    #[serde(default)]
    pub supervision: Vec<Supervision>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_deserialize() {
        let s: Script = serde_json::from_str(
            r#"{"humanInputs": [
                {"type": "revision", "ontology": {"turtle": "@prefix : <http://e.org/#> . :A a <http://www.w3.org/2002/07/owl#Class> ."}},
                {"type": "alignmentReview", "gold": {"path": "gold.ttl"}},
                {"type": "evaluation"}
            ], "supervision": [{"action": "InjectGuidance", "text": "more gait"}, {"action": "Stop"}]}"#,
        )
        .unwrap();
        assert_eq!(s.human_inputs.len(), 3);
        assert_eq!(s.supervision[0], Supervision::InjectGuidance("more gait".into()));
        let HumanInput::Revision { ontology } = s.human_inputs[0].clone().resolve(None).unwrap() else { panic!() };
        assert_eq!(ontology.classes.len(), 1);
        assert!(matches!(s.human_inputs[1].clone().resolve(None), Err(InputError::PathNotAllowed)));
    }
}
