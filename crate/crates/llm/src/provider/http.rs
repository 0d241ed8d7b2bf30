use reqwest::blocking::{Client, RequestBuilder};
use reqwest::StatusCode;
use serde_json::{json, Value};

use super::{Completion, LlmProvider, ProviderConfig};
use crate::error::ProviderError;

fn send(req: RequestBuilder) -> Result<Value, ProviderError> {
    let resp = req.send().map_err(|e| {
        if e.is_connect() || e.is_timeout() || e.is_request() {
            ProviderError::Transient(e.to_string())
        } else {
            ProviderError::Fatal(e.to_string())
        }
    })?;
    let status = resp.status();
    let body = resp.text().map_err(|e| ProviderError::Transient(e.to_string()))?;
    if status == StatusCode::TOO_MANY_REQUESTS || status.is_server_error() {
        return Err(ProviderError::Transient(format!("HTTP {status}: {}", truncate(&body))));
    }
    if !status.is_success() {
        return Err(ProviderError::Fatal(format!("HTTP {status}: {}", truncate(&body))));
    }
    serde_json::from_str(&body).map_err(|e| ProviderError::Fatal(format!("invalid JSON response: {e}")))
}

fn truncate(s: &str) -> String {
    s.chars().take(200).collect()
}

fn text_at(v: &Value, path: &[&str]) -> Result<String, ProviderError> {
    let mut cur = v;
    for key in path {
        cur = match key.parse::<usize>() {
            Ok(i) => &cur[i],
            Err(_) => &cur[*key],
        };
    }
    cur.as_str()
        .map(str::to_string)
        .ok_or_else(|| ProviderError::Fatal(format!("response has no text at {}", path.join("."))))
}

/// `POST {base}/chat/completions` with bearer authentication.
pub struct OpenAiCompatibleProvider {
    client: Client,
    config: ProviderConfig,
}

impl OpenAiCompatibleProvider {
    pub fn new(client: Client, config: ProviderConfig) -> Self {
        Self { client, config }
    }
}

impl LlmProvider for OpenAiCompatibleProvider {
    fn complete(&self, model: &str, prompt: &str, temperature: Option<f64>) -> Result<Completion, ProviderError> {
        let mut body = json!({ "model": model, "messages": [{ "role": "user", "content": prompt }] });
        if let Some(t) = temperature {
            body["temperature"] = json!(t);
        }
        let mut req = self.client.post(format!("{}/chat/completions", self.config.base_url)).json(&body);
        if let Some(key) = &self.config.api_key {
            req = req.bearer_auth(key);
        }
        let v = send(req)?;
        Ok(Completion {
            text: text_at(&v, &["choices", "0", "message", "content"])?,
            input_tokens: v["usage"]["prompt_tokens"].as_u64(),
            output_tokens: v["usage"]["completion_tokens"].as_u64(),
        })
    }
}

/// Anthropic Messages API.
pub struct AnthropicProvider {
    client: Client,
    config: ProviderConfig,
}

impl AnthropicProvider {
    pub fn new(client: Client, config: ProviderConfig) -> Self {
        Self { client, config }
    }
}

impl LlmProvider for AnthropicProvider {
    fn complete(&self, model: &str, prompt: &str, temperature: Option<f64>) -> Result<Completion, ProviderError> {
        let mut body = json!({
            "model": model,
            "max_tokens": 4096,
            "messages": [{ "role": "user", "content": prompt }],
        });
        if let Some(t) = temperature {
            body["temperature"] = json!(t);
        }
        let req = self
            .client
            .post(format!("{}/v1/messages", self.config.base_url))
            .header("x-api-key", self.config.api_key.clone().unwrap_or_default())
            .header("anthropic-version", "2023-06-01")
            .json(&body);
        let v = send(req)?;
        Ok(Completion {
            text: text_at(&v, &["content", "0", "text"])?,
            input_tokens: v["usage"]["input_tokens"].as_u64(),
            output_tokens: v["usage"]["output_tokens"].as_u64(),
        })
    }
}

/// Gemini `generateContent`.
pub struct GeminiProvider {
    client: Client,
    config: ProviderConfig,
}

impl GeminiProvider {
    pub fn new(client: Client, config: ProviderConfig) -> Self {
        Self { client, config }
    }
}

impl LlmProvider for GeminiProvider {
    fn complete(&self, model: &str, prompt: &str, temperature: Option<f64>) -> Result<Completion, ProviderError> {
        let mut body = json!({ "contents": [{ "role": "user", "parts": [{ "text": prompt }] }] });
        if let Some(t) = temperature {
            body["generationConfig"] = json!({ "temperature": t });
        }
        let req = self
            .client
            .post(format!("{}/v1beta/models/{model}:generateContent", self.config.base_url))
            .header("x-goog-api-key", self.config.api_key.clone().unwrap_or_default())
            .json(&body);
        let v = send(req)?;
        Ok(Completion {
            text: text_at(&v, &["candidates", "0", "content", "parts", "0", "text"])?,
            input_tokens: v["usageMetadata"]["promptTokenCount"].as_u64(),
            output_tokens: v["usageMetadata"]["candidatesTokenCount"].as_u64(),
        })
    }
}
