//! Provider abstraction and configuration from the environment.

mod http;
mod scripted;

use std::time::Duration;

pub use http::{AnthropicProvider, GeminiProvider, OpenAiCompatibleProvider};
pub use scripted::ScriptedProvider;

use crate::error::{LlmError, ProviderError};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Completion {
    pub text: String,
    pub input_tokens: Option<u64>,
    pub output_tokens: Option<u64>,
}

impl Completion {
    pub fn text(text: impl Into<String>) -> Self {
        Self { text: text.into(), ..Self::default() }
    }
}

pub trait LlmProvider: Send + Sync {
    fn complete(&self, model: &str, prompt: &str, temperature: Option<f64>) -> Result<Completion, ProviderError>;
}

/// Wire protocol spoken by a provider.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProviderKind {
    OpenAiCompatible,
    Anthropic,
    Gemini,
}

impl ProviderKind {
    /// Well-known names map to their native API; any other name is assumed
    /// to be an OpenAI-compatible endpoint (for example a local Llama server).
    pub fn for_name(name: &str) -> Self {
        match name.to_ascii_lowercase().as_str() {
            "anthropic" | "claude" => ProviderKind::Anthropic,
            "gemini" | "bard" | "google" => ProviderKind::Gemini,
            _ => ProviderKind::OpenAiCompatible,
        }
    }

    pub fn default_base_url(self) -> Option<&'static str> {
        match self {
            ProviderKind::OpenAiCompatible => None,
            ProviderKind::Anthropic => Some("https://api.anthropic.com"),
            ProviderKind::Gemini => Some("https://generativelanguage.googleapis.com"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProviderConfig {
    pub name: String,
    pub kind: ProviderKind,
    pub base_url: String,
    pub api_key: Option<String>,
    pub timeout: Duration,
}

/// `openai` -> `OPENAI`, `llama-2` -> `LLAMA_2`.
pub fn env_prefix(provider: &str) -> String {
    provider.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_uppercase() } else { '_' }).collect()
}

impl ProviderConfig {
    /// Reads `<PROVIDER>_API_KEY` and `<PROVIDER>_BASE_URL` through `lookup`.
    pub fn from_lookup(provider: &str, lookup: impl Fn(&str) -> Option<String>) -> Result<Self, LlmError> {
        let prefix = env_prefix(provider);
        let kind = ProviderKind::for_name(provider);
        let key_var = format!("{prefix}_API_KEY");
        let url_var = format!("{prefix}_BASE_URL");
        let api_key = lookup(&key_var).filter(|k| !k.is_empty());
        let base_url = lookup(&url_var)
            .filter(|u| !u.is_empty())
            .or_else(|| {
                if provider.eq_ignore_ascii_case("openai") || provider.eq_ignore_ascii_case("chatgpt") {
                    Some("https://api.openai.com/v1".to_string())
                } else {
                    kind.default_base_url().map(str::to_string)
                }
            });
        let Some(base_url) = base_url else {
            return Err(LlmError::Unconfigured(provider.to_string(), url_var));
        };
        // Hosted APIs need a key; self-hosted compatible servers may not.
        if api_key.is_none() && kind != ProviderKind::OpenAiCompatible {
            return Err(LlmError::Unconfigured(provider.to_string(), key_var));
        }
        Ok(Self {
            name: provider.to_string(),
            kind,
            base_url: base_url.trim_end_matches('/').to_string(),
            api_key,
            timeout: Duration::from_secs(120),
        })
    }

    pub fn from_env(provider: &str) -> Result<Self, LlmError> {
        Self::from_lookup(provider, |k| std::env::var(k).ok())
    }

    pub fn build(&self) -> Result<Box<dyn LlmProvider>, LlmError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(self.timeout)
            .build()
            .map_err(|e| LlmError::Unconfigured(self.name.clone(), e.to_string()))?;
        Ok(match self.kind {
            ProviderKind::OpenAiCompatible => Box::new(OpenAiCompatibleProvider::new(client, self.clone())),
            ProviderKind::Anthropic => Box::new(AnthropicProvider::new(client, self.clone())),
            ProviderKind::Gemini => Box::new(GeminiProvider::new(client, self.clone())),
        })
    }
}
