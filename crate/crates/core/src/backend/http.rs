//! OpenAI-compatible chat-completions backend over HTTP.
//!
//! Credentials are read from an environment variable at call time and are
//! never stored in the config struct, so serializing a backend config can
//! never embed a secret.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{
    BackendError, BackendResponse, ChatMessage, ModelBackend, ToolCallRequest, ToolSchema,
};

/// Connection settings for one chat-completions endpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HttpBackendConfig {
    /// Base URL up to but excluding `/chat/completions`.
    pub base_url: String,
    pub model: String,
    /// Name of the environment variable holding the API key.
    pub api_key_env: String,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
}

fn default_temperature() -> f64 {
    0.7
}

fn default_timeout_secs() -> u64 {
    120
}

pub struct HttpBackend {
    id: String,
    config: HttpBackendConfig,
    client: reqwest::blocking::Client,
}

impl HttpBackend {
    pub fn new(config: HttpBackendConfig) -> Result<Self, BackendError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(std::time::Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| BackendError::Protocol(format!("client build failed: {e}")))?;
        Ok(HttpBackend { id: format!("http:{}", config.model), config, client })
    }

    fn api_key(&self) -> Result<String, BackendError> {
        std::env::var(&self.config.api_key_env)
            .map_err(|_| BackendError::MissingCredentials(self.config.api_key_env.clone()))
    }

    fn wire_message(m: &ChatMessage) -> Value {
        match m {
            ChatMessage::System { content } => json!({ "role": "system", "content": content }),
            ChatMessage::User { content } => json!({ "role": "user", "content": content }),
            ChatMessage::Assistant { content, tool_calls } => {
                let mut msg = json!({ "role": "assistant", "content": content });
                if !tool_calls.is_empty() {
                    msg["tool_calls"] = tool_calls
                        .iter()
                        .map(|c| {
                            json!({
                                "id": c.id,
                                "type": "function",
                                "function": {
                                    "name": c.name,
                                    "arguments": c.arguments.to_string(),
                                },
                            })
                        })
                        .collect();
                }
                msg
            }
            ChatMessage::Tool { call_id, name, content } => json!({
                "role": "tool",
                "tool_call_id": call_id,
                "name": name,
                "content": content.to_string(),
            }),
        }
    }
}

impl ModelBackend for HttpBackend {
    fn backend_id(&self) -> &str {
        &self.id
    }

    fn complete(
        &self,
        messages: &[ChatMessage],
        tools: &[ToolSchema],
    ) -> Result<BackendResponse, BackendError> {
        let key = self.api_key()?;
        let mut body = json!({
            "model": self.config.model,
            "temperature": self.config.temperature,
            "messages": messages.iter().map(Self::wire_message).collect::<Vec<_>>(),
        });
        if !tools.is_empty() {
            body["tools"] = tools
                .iter()
                .map(|t| {
                    json!({
                        "type": "function",
                        "function": {
                            "name": t.name,
                            "description": t.description,
                            "parameters": t.parameters,
                        },
                    })
                })
                .collect();
        }

        let url = format!("{}/chat/completions", self.config.base_url.trim_end_matches('/'));
        let resp = self
            .client
            .post(&url)
            .bearer_auth(key)
            .json(&body)
            .send()
            .map_err(|e| BackendError::Transport(e.to_string()))?;

        let status = resp.status();
        if !status.is_success() {
            // 429 and 5xx are transient; anything else is a protocol problem.
            let retryable = status.as_u16() == 429 || status.is_server_error();
            let message = format!("{status}: {}", resp.text().unwrap_or_default());
            return if retryable {
                Err(BackendError::Transport(message))
            } else {
                Err(BackendError::Protocol(message))
            };
        }

        let payload: Value = resp
            .json()
            .map_err(|e| BackendError::Protocol(format!("invalid response body: {e}")))?;
        let message = payload
            .get("choices")
            .and_then(|c| c.get(0))
            .and_then(|c| c.get("message"))
            .ok_or_else(|| BackendError::Protocol("response has no choices".into()))?;

        if let Some(calls) = message.get("tool_calls").and_then(Value::as_array) {
            if !calls.is_empty() {
                let mut out = Vec::with_capacity(calls.len());
                for c in calls {
                    let id = c.get("id").and_then(Value::as_str).unwrap_or_default().to_string();
                    let f = c
                        .get("function")
                        .ok_or_else(|| BackendError::Protocol("tool call without function".into()))?;
                    let name = f
                        .get("name")
                        .and_then(Value::as_str)
                        .ok_or_else(|| BackendError::Protocol("tool call without name".into()))?
                        .to_string();
                    let raw_args = f.get("arguments").and_then(Value::as_str).unwrap_or("{}");
                    // Malformed argument JSON is surfaced as-is so the loop
                    // can charge the budget and report a tool error.
                    let arguments = serde_json::from_str(raw_args)
                        .unwrap_or_else(|_| json!({ "_raw": raw_args }));
                    out.push(ToolCallRequest { id, name, arguments });
                }
                return Ok(BackendResponse::ToolCalls(out));
            }
        }

        let content = message
            .get("content")
            .and_then(Value::as_str)
            .unwrap_or_default()
            .to_string();
        Ok(BackendResponse::Message(content))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_credentials_fail_before_any_network_io() {
        let backend = HttpBackend::new(HttpBackendConfig {
            base_url: "http://localhost:9".into(),
            model: "m".into(),
            api_key_env: "AGORA_TEST_KEY_THAT_DOES_NOT_EXIST".into(),
            temperature: 0.0,
            timeout_secs: 1,
        })
        .unwrap();
        match backend.complete(&[], &[]) {
            Err(BackendError::MissingCredentials(var)) => {
                assert!(var.contains("AGORA_TEST_KEY"));
            }
            other => panic!("expected missing credentials, got {other:?}"),
        }
    }

    #[test]
    fn config_serialization_never_contains_a_secret() {
        let cfg = HttpBackendConfig {
            base_url: "http://example.test/v1".into(),
            model: "m".into(),
            api_key_env: "SOME_KEY_ENV".into(),
            temperature: 0.1,
            timeout_secs: 5,
        };
        let text = serde_json::to_string(&cfg).unwrap();
        // Only the env var *name* appears, never a value.
        assert!(text.contains("SOME_KEY_ENV"));
        assert!(!text.to_lowercase().contains("bearer"));
    }
}
