use std::collections::VecDeque;
use std::sync::Mutex;

use super::{Completion, LlmProvider};
use crate::error::ProviderError;

type Responder = Box<dyn Fn(&str, &str) -> Result<Completion, ProviderError> + Send + Sync>;

/// In-process provider for tests and fixture recording.
///
/// Queued outcomes are returned first, in order; once the queue is empty the
/// fallback responder (if any) answers.
pub struct ScriptedProvider {
    queue: Mutex<VecDeque<Result<Completion, ProviderError>>>,
    fallback: Option<Responder>,
    calls: Mutex<Vec<(String, String)>>,
}

impl Default for ScriptedProvider {
    fn default() -> Self {
        Self { queue: Mutex::new(VecDeque::new()), fallback: None, calls: Mutex::new(Vec::new()) }
    }
}

impl ScriptedProvider {
    pub fn new<I, S>(responses: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let p = Self::default();
        for r in responses {
            p.push(Ok(Completion::text(r)));
        }
        p
    }

    pub fn with_responder(f: impl Fn(&str, &str) -> Result<Completion, ProviderError> + Send + Sync + 'static) -> Self {
        Self { fallback: Some(Box::new(f)), ..Self::default() }
    }

    pub fn push(&self, outcome: Result<Completion, ProviderError>) {
        self.queue.lock().expect("scripted queue").push_back(outcome);
    }

    /// `(model, prompt)` for every call received so far.
    pub fn calls(&self) -> Vec<(String, String)> {
        self.calls.lock().expect("scripted calls").clone()
    }
}

impl LlmProvider for ScriptedProvider {
    fn complete(&self, model: &str, prompt: &str, _temperature: Option<f64>) -> Result<Completion, ProviderError> {
        self.calls.lock().expect("scripted calls").push((model.to_string(), prompt.to_string()));
        if let Some(next) = self.queue.lock().expect("scripted queue").pop_front() {
            return next;
        }
        match &self.fallback {
            Some(f) => f(model, prompt),
            None => Err(ProviderError::Fatal("scripted provider has no response left".into())),
        }
    }
}
