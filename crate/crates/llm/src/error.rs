use thiserror::Error;

/// Failure of a single provider request.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProviderError {
    /// Connection failures, timeouts, rate limiting and 5xx responses.
    #[error("transient failure: {0}")]
    Transient(String),
    #[error("request failed: {0}")]
    Fatal(String),
}

impl ProviderError {
    pub fn is_transient(&self) -> bool {
        matches!(self, ProviderError::Transient(_))
    }
}

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("no cassette entry for request hash {hash} (provider {provider}, model {model})")]
    MissingCassetteEntry { hash: String, provider: String, model: String },
    #[error("provider {provider} failed after {attempts} attempt(s): {source}")]
    Provider {
        provider: String,
        attempts: u32,
        #[source]
        source: ProviderError,
    },
    #[error("provider {0} is not configured (set {1})")]
    Unconfigured(String, String),
    #[error("cassette {path}: {message}")]
    Cassette { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("placeholder {{{0}}} is not bound")]
    UnboundPlaceholder(String),
    #[error("unterminated placeholder starting at byte {0}")]
    Unterminated(usize),
}

#[derive(Debug, Error)]
pub enum WorkflowError {
    #[error("session is {state}; {operation} is not allowed")]
    WrongState { state: String, operation: String },
    #[error("methodology {actual} does not support {operation}")]
    WrongMethodology { actual: String, operation: String },
    #[error("step {0} is a human step and requires input")]
    HumanInputRequired(u8),
    #[error("step {0} is an LLM step and takes no human input")]
    UnexpectedHumanInput(u8),
    #[error("step {step} expects {expected} input")]
    WrongHumanInput { step: u8, expected: &'static str },
    #[error("missing prerequisite: {0}")]
    MissingArtifact(&'static str),
    #[error("supervisor failed: {0}")]
    Supervisor(String),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Ontology(#[from] ontowb_core::OntologyError),
    #[error(transparent)]
    Align(#[from] ontowb_core::AlignError),
}
