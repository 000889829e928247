use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Where and how to reach a chat-completions model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelEndpoint {
    /// Base URL; `/chat/completions` is appended.
    pub base_url: String,
    pub model: String,
    /// Name of the environment variable holding the bearer token. Empty
    /// means no Authorization header is sent.
    pub auth_env: String,
    pub timeout_secs: f64,
    pub max_retries: u32,
    pub temperature: f64,
    /// First retry delay; doubled on every further attempt.
    pub backoff_ms: u64,
}

impl Default for ModelEndpoint {
    fn default() -> Self {
        ModelEndpoint {
            base_url: "https://api.openai.com/v1".into(),
            model: "gpt-4.1".into(),
            auth_env: "OPENAI_API_KEY".into(),
            timeout_secs: 120.0,
            max_retries: 4,
            temperature: 0.0,
            backoff_ms: 500,
        }
    }
}

impl ModelEndpoint {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::InvalidEndpoint(m.into()));
        if self.base_url.trim().is_empty() {
            return bad("base_url is empty");
        }
        if self.model.trim().is_empty() {
            return bad("model is empty");
        }
        if !(self.timeout_secs > 0.0 && self.timeout_secs.is_finite()) {
            return bad("timeout_secs must be positive");
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return bad("temperature must be non-negative");
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }

    /// Stable identifier used in cache keys and run records.
    pub fn id(&self) -> String {
        format!("{}#{}", self.base_url.trim_end_matches('/'), self.model)
    }

    /// Delay before retry number `attempt` (0-based), capped at one minute.
    pub fn backoff(&self, attempt: u32) -> Duration {
        let ms = self.backoff_ms.saturating_mul(1u64 << attempt.min(16));
        Duration::from_millis(ms.min(60_000))
    }
}
