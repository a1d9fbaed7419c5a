//! Pluggable model backends. A backend is stateless between invocations:
//! given the full message transcript and the tool schemas, it returns either
//! a final message or a list of tool calls. All state lives in the
//! transcript, which makes scripted backends exactly replayable.

pub mod scripted;

#[cfg(feature = "http-backend")]
pub mod http;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One requested tool invocation from a backend response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolCallRequest {
    pub id: String,
    pub name: String,
    pub arguments: serde_json::Value,
}

/// JSON-schema description of one tool, as sent to the backend.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToolSchema {
    pub name: String,
    pub description: String,
    pub parameters: serde_json::Value,
}

/// One entry in a transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum ChatMessage {
    System { content: String },
    User { content: String },
    Assistant {
        content: Option<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        tool_calls: Vec<ToolCallRequest>,
    },
    /// A tool result fed back into the transcript. `content` is the
    /// serialized tool output, or a structured error object for failed calls.
    Tool {
        call_id: String,
        name: String,
        content: serde_json::Value,
    },
}

/// What a backend produced for one completion request.
#[derive(Debug, Clone, PartialEq)]
pub enum BackendResponse {
    /// Final message with no tool calls: the agent yields.
    Message(String),
    ToolCalls(Vec<ToolCallRequest>),
}

#[derive(Debug, Error)]
pub enum BackendError {
    /// Transient transport failure; safe to retry.
    #[error("backend transport error: {0}")]
    Transport(String),
    /// The backend answered but the payload was not understood.
    #[error("backend protocol error: {0}")]
    Protocol(String),
    #[error("missing credential: environment variable {0} is not set")]
    MissingCredentials(String),
}

impl BackendError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, BackendError::Transport(_))
    }
}

/// A stateless chat-completion backend with tool-call support.
pub trait ModelBackend: Send + Sync {
    fn backend_id(&self) -> &str;

    fn complete(
        &self,
        messages: &[ChatMessage],
        tools: &[ToolSchema],
    ) -> Result<BackendResponse, BackendError>;
}

/// Count the tool results already present in a transcript. Scripted
/// backends use this as their notion of "how far along the turn is".
pub fn tool_results_in(messages: &[ChatMessage]) -> usize {
    messages.iter().filter(|m| matches!(m, ChatMessage::Tool { .. })).count()
}

/// The system prompt of a transcript, if any.
pub fn system_prompt_of(messages: &[ChatMessage]) -> Option<&str> {
    messages.iter().find_map(|m| match m {
        ChatMessage::System { content } => Some(content.as_str()),
        _ => None,
    })
}
