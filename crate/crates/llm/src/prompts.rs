//! Prompt templates with `{name}` placeholders. `{{` and `}}` produce
//! literal braces.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::TemplateError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PromptRole {
    OntologyEngineer,
    #[serde(rename = "KW")]
    KnowledgeWorker,
    #[serde(rename = "DE")]
    DomainExpert,
    #[serde(rename = "KE")]
    KnowledgeEngineer,
}

impl PromptRole {
    pub fn abbreviation(self) -> &'static str {
        match self {
            PromptRole::OntologyEngineer => "OE",
            PromptRole::KnowledgeWorker => "KW",
            PromptRole::DomainExpert => "DE",
            PromptRole::KnowledgeEngineer => "KE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PromptTemplate {
    pub id: &'static str,
    pub role: PromptRole,
    pub text: &'static str,
}

pub type Bindings = BTreeMap<String, String>;

enum Piece<'a> {
    Text(&'a str),
    Brace(char),
    Placeholder(&'a str),
}

fn pieces(text: &str) -> Result<Vec<Piece<'_>>, TemplateError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let (mut i, mut start) = (0, 0);
    while i < bytes.len() {
        match bytes[i] {
            b'{' | b'}' if bytes.get(i + 1) == Some(&bytes[i]) => {
                out.push(Piece::Text(&text[start..i]));
                out.push(Piece::Brace(bytes[i] as char));
                i += 2;
                start = i;
            }
            b'{' => {
                out.push(Piece::Text(&text[start..i]));
                let close = text[i + 1..].find('}').ok_or(TemplateError::Unterminated(i))?;
                let name = &text[i + 1..i + 1 + close];
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(TemplateError::Unterminated(i));
                }
                out.push(Piece::Placeholder(name));
                i += close + 2;
                start = i;
            }
            _ => i += 1,
        }
    }
    out.push(Piece::Text(&text[start..]));
    Ok(out)
}

impl PromptTemplate {
    /// Placeholder names in order of first appearance.
    pub fn placeholders(&self) -> Vec<&'static str> {
        let mut names = Vec::new();
        for p in pieces(self.text).expect("built-in templates are well formed") {
            if let Piece::Placeholder(n) = p {
                if !names.contains(&n) {
                    names.push(n);
                }
            }
        }
        names
    }

    pub fn render(&self, bindings: &Bindings) -> Result<String, TemplateError> {
        render_text(self.text, bindings)
    }
}

pub fn render_text(text: &str, bindings: &Bindings) -> Result<String, TemplateError> {
    let mut out = String::with_capacity(text.len());
    for p in pieces(text)? {
        match p {
            Piece::Text(t) => out.push_str(t),
            Piece::Brace(c) => out.push(c),
            Piece::Placeholder(name) => match bindings.get(name) {
                Some(v) => out.push_str(v),
                None => return Err(TemplateError::UnboundPlaceholder(name.to_string())),
            },
        }
    }
    Ok(out)
}

pub const ONE_SHOT: PromptTemplate = PromptTemplate {
    id: "os",
    role: PromptRole::OntologyEngineer,
    text: "Act as an Ontology Engineer, I need to generate an ontology about {scope}. The aim of the ontology is {aim}. {requirements} Give the output in TTL format.",
};

pub const COT_PROMPT_1: PromptTemplate = PromptTemplate {
    id: "cot-1",
    role: PromptRole::OntologyEngineer,
    text: "Act as an Ontology Engineer, I need to generate an ontology about {scope}. The aim of the ontology is {aim}.",
};

pub const COT_PROMPT_2: PromptTemplate = PromptTemplate {
    id: "cot-2",
    role: PromptRole::OntologyEngineer,
    text: "{requirements} Give the output in TTL format.",
};

pub const XHCOME_GENERATE: PromptTemplate = PromptTemplate {
    id: "xhcome-generate",
    role: PromptRole::OntologyEngineer,
    text: "Act as an Ontology Engineer, I need to generate an ontology about {scope}. The aim of the ontology is {aim}. {requirements} The ontology must be able to answer these competency questions:\n{competencyQuestions}\nGive the output in TTL format.",
};

pub const XHCOME_COMPARE: PromptTemplate = PromptTemplate {
    id: "xhcome-compare",
    role: PromptRole::OntologyEngineer,
    text: "Act as an Ontology Engineer. Compare the generated ontology with the gold standard ontology below. For each class and object property of the generated ontology, name the gold standard entity it corresponds to, or state that it has no counterpart.\n\nGenerated ontology:\n{priorOutput}\n\nGold standard ontology:\n{gold}",
};

pub const XHCOME_REEVALUATE: PromptTemplate = PromptTemplate {
    id: "xhcome-reevaluate",
    role: PromptRole::OntologyEngineer,
    text: "Act as an Ontology Engineer. Evaluate the revised ontology against the gold standard ontology below in the same way: list corresponding entities and entities without a counterpart.\n\nRevised ontology:\n{priorOutput}\n\nGold standard ontology:\n{gold}",
};

pub const SIMX_KNOWLEDGE_WORKER: PromptTemplate = PromptTemplate {
    id: "simx-kw",
    role: PromptRole::KnowledgeWorker,
    text: "We are simulating an ontology engineering meeting between a Knowledge Worker (KW), a Domain Expert (DE) and a Knowledge Engineer (KE). You are the KW. The ontology is about {scope}. Its aim is {aim}. {requirements} Competency questions:\n{competencyQuestions}\n\nConversation so far:\n{priorOutput}\n\nAs the KW, describe the data and requirements the next version of the ontology must cover.",
};

pub const SIMX_DOMAIN_EXPERT: PromptTemplate = PromptTemplate {
    id: "simx-de",
    role: PromptRole::DomainExpert,
    text: "We are simulating an ontology engineering meeting between a Knowledge Worker (KW), a Domain Expert (DE) and a Knowledge Engineer (KE). You are the DE. The ontology is about {scope}.\n\nConversation so far:\n{priorOutput}\n\nAs the DE, critique the requirements and the current ontology, pointing out missing or incorrect domain concepts.",
};

pub const SIMX_KNOWLEDGE_ENGINEER: PromptTemplate = PromptTemplate {
    id: "simx-ke",
    role: PromptRole::KnowledgeEngineer,
    text: "We are simulating an ontology engineering meeting between a Knowledge Worker (KW), a Domain Expert (DE) and a Knowledge Engineer (KE). You are the KE. The ontology is about {scope}.\n\nConversation so far:\n{priorOutput}\n\nAs the KE, produce the complete revised ontology. Give the output in TTL format.",
};

pub const NL_TO_SWRL: PromptTemplate = PromptTemplate {
    id: "nl2swrl",
    role: PromptRole::KnowledgeEngineer,
    text: "Act as a Knowledge Engineer. Convert the following rule from natural language into a SWRL rule, using the classes and object properties of the ontology where they exist. Write it as Atom(?x) ^ property(?x, ?y) -> Head(?y) and return only the rule.\n\nRule: {nlRule}",
};

pub const PD_SCOPE: &str = "Parkinson disease monitoring and alerting patients";
pub const PD_AIM: &str = "to collect movement data of Parkinson disease patients through wearable sensors, analyze them in a way that enables the understanding (uncover) of their semantics, and use these semantics to semantically annotate the data for interoperability and interlinkage with other related data";
pub const PD_REQUIREMENTS: &str = "You will reuse other related ontologies about neurodegenerative diseases. In the process, you should focus on modeling different aspects of PD, such as disease severity, movement patterns of activities of daily living, and gait.";

/// Bindings for the Parkinson's disease monitoring ontology.
pub fn pd_bindings() -> Bindings {
    [("scope", PD_SCOPE), ("aim", PD_AIM), ("requirements", PD_REQUIREMENTS)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}
