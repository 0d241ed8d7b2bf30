//! Optional TOML configuration: alignment threshold and provider endpoints.
//!
//! ```toml
//! [alignment]
//! threshold = 0.85
//! measure = "TokenJaccard"
//!
//! [providers.llama2]
//! base_url = "http://localhost:8080/v1"
//! api_key_env = "LLAMA2_KEY"
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use ontowb_core::align::{AlignMode, AlignmentConfig, SimilarityMeasure};
use ontowb_llm::provider::ProviderConfig;
use ontowb_llm::{Gateway, LlmError};
use serde::Deserialize;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub alignment: AlignmentSection,
    #[serde(default)]
    pub providers: BTreeMap<String, ProviderSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlignmentSection {
    pub threshold: Option<f64>,
    pub measure: Option<SimilarityMeasure>,
    pub exact_only: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderSection {
    pub base_url: Option<String>,
    /// Environment variable holding the API key; defaults to `<P>_API_KEY`.
    pub api_key_env: Option<String>,
}

impl Config {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(toml::from_str(&text)?)
    }

    /// Alignment settings; `theta` from the command line wins over the file.
    pub fn alignment_config(&self, theta: Option<f64>) -> Result<AlignmentConfig, ontowb_core::AlignError> {
        let a = &self.alignment;
        let mode = if a.exact_only == Some(true) { AlignMode::ExactOnly } else { AlignMode::ExactThenSimilarity };
        let default = AlignmentConfig::default();
        AlignmentConfig::new(
            theta.or(a.threshold).unwrap_or(default.similarity_threshold),
            a.measure.unwrap_or(default.similarity_measure),
            mode,
        )
    }

    /// Registers providers named in the file; others are built from the
    /// environment on first use.
    pub fn register_providers(&self, gateway: &Gateway) -> Result<(), LlmError> {
        for (name, section) in &self.providers {
            let prefix = ontowb_llm::provider::env_prefix(name);
            let key_var = section.api_key_env.clone().unwrap_or_else(|| format!("{prefix}_API_KEY"));
            let url_var = format!("{prefix}_BASE_URL");
            let config = ProviderConfig::from_lookup(name, |k| {
                if k == url_var {
                    section.base_url.clone().or_else(|| std::env::var(k).ok())
                } else if k.ends_with("_API_KEY") {
                    std::env::var(&key_var).ok()
                } else {
                    std::env::var(k).ok()
                }
            })?;
            gateway.register(name, config.build()?);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_applies_theta() {
        let c: Config = toml::from_str(
            "[alignment]\nthreshold = 0.9\nmeasure = \"NormalizedLevenshtein\"\n[providers.local]\nbase_url = \"http://localhost:1/v1\"\n",
        )
        .unwrap();
        let a = c.alignment_config(None).unwrap();
        assert_eq!(a.similarity_threshold, 0.9);
        assert_eq!(a.similarity_measure, SimilarityMeasure::NormalizedLevenshtein);
        assert_eq!(c.alignment_config(Some(0.7)).unwrap().similarity_threshold, 0.7);
        assert!(c.alignment_config(Some(1.5)).is_err());
        let gw = Gateway::isolated(ontowb_llm::Cassette::in_memory(ontowb_llm::CassetteMode::Passthrough));
        c.register_providers(&gw).unwrap();
    }
}
