//! Model access: the client trait and the HTTP chat-completions client.

use std::thread;

use reqwest::blocking::Client;
use reqwest::StatusCode;
use serde_json::{json, Value};
use thiserror::Error;
use topobench_core::TaskInstance;

use crate::endpoint::ModelEndpoint;
use crate::HarnessError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CallError {
    #[error("authentication failed: {0}")]
    Auth(String),
    #[error("no response after {attempts} attempts")]
    Timeout { attempts: u32 },
    #[error("rate limited after {attempts} attempts")]
    RateLimited { attempts: u32 },
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("server returned {status}: {body}")]
    Http { status: u16, body: String },
}

/// One request. Test doubles may look at the instance; real endpoints only
/// ever see the prompt.
pub struct Query<'a> {
    pub instance: &'a TaskInstance,
    pub prompt: &'a str,
}

pub trait ModelClient: Sync {
    /// Identifies the endpoint and model in cache keys and records.
    fn endpoint_id(&self) -> String;
    fn complete(&self, query: &Query<'_>) -> Result<String, CallError>;
}

pub struct HttpClient {
    endpoint: ModelEndpoint,
    http: Client,
}

enum Attempt {
    Done(Result<String, CallError>),
    Retry(CallError),
}

impl HttpClient {
    pub fn new(endpoint: ModelEndpoint) -> Result<Self, HarnessError> {
        endpoint.validate()?;
        let http = Client::builder()
            .timeout(endpoint.timeout())
            .build()
            .map_err(|e| HarnessError::InvalidEndpoint(e.to_string()))?;
        Ok(HttpClient { endpoint, http })
    }

    fn token(&self) -> Result<Option<String>, CallError> {
        if self.endpoint.auth_env.is_empty() {
            return Ok(None);
        }
        match std::env::var(&self.endpoint.auth_env) {
            Ok(t) if !t.trim().is_empty() => Ok(Some(t)),
            _ => Err(CallError::Auth(format!(
                "environment variable {} is not set",
                self.endpoint.auth_env
            ))),
        }
    }

    fn attempt(&self, body: &Value, token: Option<&str>, attempts: u32) -> Attempt {
        let url = format!(
            "{}/chat/completions",
            self.endpoint.base_url.trim_end_matches('/')
        );
        let mut req = self.http.post(url).json(body);
        if let Some(t) = token {
            req = req.bearer_auth(t);
        }
        let resp = match req.send() {
            Ok(r) => r,
            Err(e) if e.is_timeout() || e.is_connect() || e.is_request() => {
                return Attempt::Retry(CallError::Timeout { attempts });
            }
            Err(e) => return Attempt::Done(Err(CallError::MalformedResponse(e.to_string()))),
        };
        let status = resp.status();
        if status == StatusCode::UNAUTHORIZED || status == StatusCode::FORBIDDEN {
            return Attempt::Done(Err(CallError::Auth(format!("server returned {status}"))));
        }
        if status == StatusCode::TOO_MANY_REQUESTS {
            return Attempt::Retry(CallError::RateLimited { attempts });
        }
        let text = match resp.text() {
            Ok(t) => t,
            Err(e) if e.is_timeout() => return Attempt::Retry(CallError::Timeout { attempts }),
            Err(e) => return Attempt::Done(Err(CallError::MalformedResponse(e.to_string()))),
        };
        if status.is_server_error() {
            return Attempt::Retry(CallError::Http {
                status: status.as_u16(),
                body: text,
            });
        }
        if !status.is_success() {
            return Attempt::Done(Err(CallError::Http {
                status: status.as_u16(),
                body: text,
            }));
        }
        Attempt::Done(extract_content(&text))
    }
}

/// Pulls `choices[0].message.content` out of a chat-completions response.
pub fn extract_content(text: &str) -> Result<String, CallError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| CallError::MalformedResponse(e.to_string()))?;
    v.pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_owned)
        .ok_or_else(|| CallError::MalformedResponse("missing choices[0].message.content".into()))
}

impl ModelClient for HttpClient {
    fn endpoint_id(&self) -> String {
        self.endpoint.id()
    }

    fn complete(&self, query: &Query<'_>) -> Result<String, CallError> {
        let token = self.token()?;
        let body = json!({
            "model": self.endpoint.model,
            "messages": [{"role": "user", "content": query.prompt}],
            "temperature": self.endpoint.temperature,
        });
        let mut attempt = 0;
        loop {
            match self.attempt(&body, token.as_deref(), attempt + 1) {
                Attempt::Done(r) => return r,
                Attempt::Retry(err) if attempt >= self.endpoint.max_retries => return Err(err),
                Attempt::Retry(_) => {
                    thread::sleep(self.endpoint.backoff(attempt));
                    attempt += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn content_extraction() {
        let ok = r#"{"choices":[{"message":{"role":"assistant","content":"0 L 0"}}]}"#;
        assert_eq!(extract_content(ok).unwrap(), "0 L 0");
        assert!(matches!(
            extract_content("{}"),
            Err(CallError::MalformedResponse(_))
        ));
        assert!(matches!(
            extract_content("not json"),
            Err(CallError::MalformedResponse(_))
        ));
    }

    #[test]
    fn missing_token_is_an_auth_error() {
        let c = HttpClient::new(ModelEndpoint {
            auth_env: "TOPOBENCH_TEST_SURELY_UNSET".into(),
            ..ModelEndpoint::default()
        })
        .unwrap();
        assert!(matches!(c.token(), Err(CallError::Auth(_))));
    }
}
