//! Cassette-aware completion with retries.

use std::collections::HashMap;
use std::sync::Mutex;
use std::time::Duration;

use crate::cassette::{request_hash, Cassette, CassetteEntry, CassetteMode};
use crate::error::LlmError;
use crate::provider::{Completion, LlmProvider, ProviderConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    /// Retries after the first attempt.
    pub max_retries: u32,
    /// Delay before retry `n` (0-based) is `base_delay * 2^n`.
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self { max_retries: 3, base_delay: Duration::from_millis(500) }
    }
}

impl RetryPolicy {
    pub fn immediate() -> Self {
        Self { base_delay: Duration::ZERO, ..Self::default() }
    }
}

pub struct Gateway {
    cassette: Mutex<Cassette>,
    providers: Mutex<HashMap<String, Box<dyn LlmProvider>>>,
    retry: RetryPolicy,
    temperature: Option<f64>,
    from_env: bool,
}

impl Gateway {
    pub fn new(cassette: Cassette) -> Self {
        Self {
            cassette: Mutex::new(cassette),
            providers: Mutex::new(HashMap::new()),
            retry: RetryPolicy::default(),
            temperature: None,
            from_env: true,
        }
    }

    /// A gateway that only uses explicitly registered providers.
    pub fn isolated(cassette: Cassette) -> Self {
        Self { from_env: false, ..Self::new(cassette) }
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn with_temperature(mut self, temperature: Option<f64>) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn register(&self, name: &str, provider: Box<dyn LlmProvider>) {
        self.providers.lock().expect("provider registry").insert(name.to_string(), provider);
    }

    pub fn mode(&self) -> CassetteMode {
        self.cassette.lock().expect("cassette").mode()
    }

    /// Returns the raw reply text for `prompt`.
    pub fn complete(&self, provider: &str, model: &str, prompt: &str) -> Result<String, LlmError> {
        self.complete_full(provider, model, prompt).map(|c| c.text)
    }

    pub fn complete_full(&self, provider: &str, model: &str, prompt: &str) -> Result<Completion, LlmError> {
        let hash = request_hash(provider, model, prompt);
        let mode = {
            let cassette = self.cassette.lock().expect("cassette");
            if cassette.mode() == CassetteMode::Replay {
                return match cassette.lookup(&hash) {
                    Some(e) => Ok(Completion::text(e.response.clone())),
                    None => Err(LlmError::MissingCassetteEntry {
                        hash,
                        provider: provider.to_string(),
                        model: model.to_string(),
                    }),
                };
            }
            cassette.mode()
        };
        let completion = self.call_with_retries(provider, model, prompt)?;
        if mode == CassetteMode::Record {
            self.cassette.lock().expect("cassette").record(CassetteEntry {
                hash,
                provider: provider.to_string(),
                model: model.to_string(),
                prompt: prompt.to_string(),
                response: completion.text.clone(),
                temperature: self.temperature,
            })?;
        }
        Ok(completion)
    }

    fn call_with_retries(&self, provider: &str, model: &str, prompt: &str) -> Result<Completion, LlmError> {
        let mut providers = self.providers.lock().expect("provider registry");
        if !providers.contains_key(provider) {
            if !self.from_env {
                return Err(LlmError::Unconfigured(provider.to_string(), "a registered provider".into()));
            }
            let built = ProviderConfig::from_env(provider)?.build()?;
            providers.insert(provider.to_string(), built);
        }
        let p = &providers[provider];
        let mut attempt = 0;
        loop {
            match p.complete(model, prompt, self.temperature) {
                Ok(c) => return Ok(c),
                Err(e) if e.is_transient() && attempt < self.retry.max_retries => {
                    let delay = self.retry.base_delay * 2u32.saturating_pow(attempt);
                    tracing::warn!(provider, attempt = attempt + 1, error = %e, "retrying transient failure");
                    if !delay.is_zero() {
                        std::thread::sleep(delay);
                    }
                    attempt += 1;
                }
                Err(source) => {
                    return Err(LlmError::Provider { provider: provider.to_string(), attempts: attempt + 1, source })
                }
            }
        }
    }
}
