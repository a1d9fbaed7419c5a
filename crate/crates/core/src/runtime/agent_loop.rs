//! The per-agent autonomous turn: a budgeted tool-calling loop against a
//! platform executor. One iteration asks the backend for the next step
//! given the full transcript; tool calls are dispatched atomically and
//! their results appended, so the transcript is the only state.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::backend::{
    BackendError, BackendResponse, ChatMessage, ModelBackend, ToolSchema,
};
use crate::platform::{dispatch, tool_schemas, AuthorHash, ToolExecutor, WRITE_TOOLS};

/// Upper bound on tool calls in one turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnBudget {
    pub max_tool_calls: u32,
}

impl TurnBudget {
    pub fn new(max_tool_calls: u32) -> Self {
        assert!(max_tool_calls >= 1, "budget must be at least 1");
        TurnBudget { max_tool_calls }
    }
}

/// Retry policy for transient backend failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub base_delay_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { attempts: 3, base_delay_ms: 200 }
    }
}

impl RetryPolicy {
    /// Immediate retries with no sleeping, for tests.
    pub fn instant() -> Self {
        RetryPolicy { attempts: 3, base_delay_ms: 0 }
    }
}

/// Why a turn ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TerminalReason {
    /// The backend answered with no tool calls.
    Yielded,
    BudgetExhausted,
    BackendError { message: String },
}

/// One dispatched tool call, successful or not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolCallRecord {
    pub name: String,
    pub args: Value,
    /// Hex SHA-256 of the serialized result (or error object).
    pub result_digest: String,
    pub ok: bool,
}

/// A content-creating tool call: the unit of leakage evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WriteActionRecord {
    /// Index of this write in `tool_calls` (for prefix checkpointing).
    pub call_index: usize,
    pub tool: String,
    /// `content` argument of the write, extracted verbatim.
    pub content: String,
    /// Id assigned by the platform (`post_id` or `reply_id`).
    pub created_id: u64,
}

/// Full record of one agent turn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub agent: AuthorHash,
    pub day: u32,
    pub backend_id: String,
    pub tool_calls: Vec<ToolCallRecord>,
    pub writes: Vec<WriteActionRecord>,
    pub terminal: TerminalReason,
    pub final_message: Option<String>,
}

fn digest_of(v: &Value) -> String {
    let mut h = Sha256::new();
    h.update(v.to_string().as_bytes());
    hex::encode(h.finalize())
}

fn complete_with_retry(
    backend: &dyn ModelBackend,
    messages: &[ChatMessage],
    tools: &[ToolSchema],
    retry: &RetryPolicy,
) -> Result<BackendResponse, BackendError> {
    let mut attempt = 0;
    loop {
        match backend.complete(messages, tools) {
            Ok(r) => return Ok(r),
            Err(e) if e.is_retryable() && attempt + 1 < retry.attempts => {
                if retry.base_delay_ms > 0 {
                    let delay = retry.base_delay_ms << attempt;
                    std::thread::sleep(std::time::Duration::from_millis(delay));
                }
                attempt += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Run one agent turn: loop until the budget is exhausted or the backend
/// yields. Malformed tool calls consume budget and feed a structured error
/// back into the transcript; transient backend failures are retried a
/// bounded number of times before the trace terminates with a backend
/// error. Memory mutations persist through the executor as they happen.
pub fn run_agent_turn(
    exec: &mut dyn ToolExecutor,
    agent: &AuthorHash,
    system_prompt: &str,
    backend: &dyn ModelBackend,
    budget: TurnBudget,
    day: u32,
    retry: &RetryPolicy,
) -> RunTrace {
    let tools = tool_schemas();
    let mut messages = vec![
        ChatMessage::System { content: system_prompt.to_string() },
        ChatMessage::User {
            content: format!("It is day {day}. Check the platform and act in character."),
        },
    ];
    let mut trace = RunTrace {
        agent: agent.clone(),
        day,
        backend_id: backend.backend_id().to_string(),
        tool_calls: Vec::new(),
        writes: Vec::new(),
        terminal: TerminalReason::BudgetExhausted,
        final_message: None,
    };

    let mut used = 0u32;
    while used < budget.max_tool_calls {
        let response = match complete_with_retry(backend, &messages, &tools, retry) {
            Ok(r) => r,
            Err(e) => {
                trace.terminal = TerminalReason::BackendError { message: e.to_string() };
                return trace;
            }
        };
        let calls = match response {
            BackendResponse::Message(text) => {
                trace.final_message = Some(text);
                trace.terminal = TerminalReason::Yielded;
                return trace;
            }
            BackendResponse::ToolCalls(calls) => calls,
        };
        messages.push(ChatMessage::Assistant { content: None, tool_calls: calls.clone() });

        for call in calls {
            if used >= budget.max_tool_calls {
                // Budget ran out mid-batch; remaining requests are dropped.
                trace.terminal = TerminalReason::BudgetExhausted;
                return trace;
            }
            used += 1;
            let outcome = dispatch(exec, agent, day, &call.name, &call.arguments);
            let (result_value, ok) = match outcome {
                Ok(v) => (v, true),
                Err(e) => (e.to_json(), false),
            };
            trace.tool_calls.push(ToolCallRecord {
                name: call.name.clone(),
                args: call.arguments.clone(),
                result_digest: digest_of(&result_value),
                ok,
            });
            if ok && WRITE_TOOLS.contains(&call.name.as_str()) {
                let content = call
                    .arguments
                    .get("content")
                    .and_then(Value::as_str)
                    .unwrap_or_default()
                    .to_string();
                let created_id = result_value
                    .get("post_id")
                    .or_else(|| result_value.get("reply_id"))
                    .and_then(Value::as_u64)
                    .unwrap_or_default();
                trace.writes.push(WriteActionRecord {
                    call_index: trace.tool_calls.len() - 1,
                    tool: call.name.clone(),
                    content,
                    created_id,
                });
            }
            messages.push(ChatMessage::Tool {
                call_id: call.id,
                name: call.name,
                content: result_value,
            });
        }
    }
    trace.terminal = TerminalReason::BudgetExhausted;
    trace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::scripted::SequenceBackend;
    use crate::backend::{ToolCallRequest, ToolSchema};
    use crate::platform::Store;
    use serde_json::json;
    use std::sync::atomic::{AtomicU32, Ordering};

    fn fixture() -> (Store, AuthorHash) {
        let mut store = Store::new();
        store.create_subreddit("general", "general talk").unwrap();
        let a = AuthorHash::from("pop-a1");
        store.create_account(a.clone(), "AtlasBot", "persona-1").unwrap();
        (store, a)
    }

    #[test]
    fn browse_then_yield_records_one_call() {
        let (mut store, a) = fixture();
        let backend = SequenceBackend::from_calls("scripted:t", vec![("get_newly_posted", json!({}))]);
        let t = run_agent_turn(
            &mut store, &a, "sys", &backend, TurnBudget::new(10), 0, &RetryPolicy::instant(),
        );
        assert_eq!(t.tool_calls.len(), 1);
        assert_eq!(t.terminal, TerminalReason::Yielded);
        assert!(t.writes.is_empty());
    }

    #[test]
    fn never_yielding_policy_exhausts_budget_exactly() {
        struct Loop;
        impl ModelBackend for Loop {
            fn backend_id(&self) -> &str {
                "scripted:loop"
            }
            fn complete(
                &self,
                _m: &[ChatMessage],
                _t: &[ToolSchema],
            ) -> Result<BackendResponse, BackendError> {
                Ok(BackendResponse::ToolCalls(vec![ToolCallRequest {
                    id: "c".into(),
                    name: "get_newly_posted".into(),
                    arguments: json!({}),
                }]))
            }
        }
        let (mut store, a) = fixture();
        let t = run_agent_turn(
            &mut store, &a, "sys", &Loop, TurnBudget::new(10), 0, &RetryPolicy::instant(),
        );
        assert_eq!(t.tool_calls.len(), 10);
        assert_eq!(t.terminal, TerminalReason::BudgetExhausted);
    }

    #[test]
    fn memory_appends_persist_after_the_turn() {
        let (mut store, a) = fixture();
        let backend = SequenceBackend::from_calls(
            "scripted:mem",
            vec![("append_to_memory", json!({ "text": "x" }))],
        );
        let t = run_agent_turn(
            &mut store, &a, "sys", &backend, TurnBudget::new(10), 0, &RetryPolicy::instant(),
        );
        assert_eq!(t.terminal, TerminalReason::Yielded);
        assert!(store.account(&a).unwrap().memory.ends_with('x'));
    }

    #[test]
    fn malformed_calls_consume_budget_and_continue() {
        let (mut store, a) = fixture();
        let backend = SequenceBackend::from_calls(
            "scripted:bad",
            vec![
                ("no_such_tool", json!({})),
                ("open_post", json!({ "post_id": "not a number" })),
                ("get_newly_posted", json!({})),
            ],
        );
        let t = run_agent_turn(
            &mut store, &a, "sys", &backend, TurnBudget::new(10), 0, &RetryPolicy::instant(),
        );
        assert_eq!(t.tool_calls.len(), 3);
        assert_eq!(
            t.tool_calls.iter().map(|c| c.ok).collect::<Vec<_>>(),
            vec![false, false, true]
        );
        assert_eq!(t.terminal, TerminalReason::Yielded);
    }

    #[test]
    fn writes_are_a_subset_of_tool_calls_and_create_content() {
        let (mut store, a) = fixture();
        let backend = SequenceBackend::from_calls(
            "scripted:w",
            vec![(
                "post_in_subreddit",
                json!({ "slug": "general", "title": "t", "content": "hello" }),
            )],
        );
        let t = run_agent_turn(
            &mut store, &a, "sys", &backend, TurnBudget::new(5), 2, &RetryPolicy::instant(),
        );
        assert_eq!(t.writes.len(), 1);
        assert!(t.writes.len() <= t.tool_calls.len());
        assert_eq!(t.writes[0].content, "hello");
        assert_eq!(store.post_count(), 1);
    }

    #[test]
    fn transient_failures_retry_then_terminate_with_backend_error() {
        struct Flaky {
            calls: AtomicU32,
            fail_first: u32,
        }
        impl ModelBackend for Flaky {
            fn backend_id(&self) -> &str {
                "scripted:flaky"
            }
            fn complete(
                &self,
                _m: &[ChatMessage],
                _t: &[ToolSchema],
            ) -> Result<BackendResponse, BackendError> {
                let n = self.calls.fetch_add(1, Ordering::SeqCst);
                if n < self.fail_first {
                    Err(BackendError::Transport("boom".into()))
                } else {
                    Ok(BackendResponse::Message("ok".into()))
                }
            }
        }
        let (mut store, a) = fixture();
        // Two failures then success: retries absorb them.
        let b = Flaky { calls: AtomicU32::new(0), fail_first: 2 };
        let t = run_agent_turn(
            &mut store, &a, "sys", &b, TurnBudget::new(5), 0, &RetryPolicy::instant(),
        );
        assert_eq!(t.terminal, TerminalReason::Yielded);

        // Persistent failure: bounded retries, then backend_error.
        let b = Flaky { calls: AtomicU32::new(0), fail_first: u32::MAX };
        let t = run_agent_turn(
            &mut store, &a, "sys", &b, TurnBudget::new(5), 0, &RetryPolicy::instant(),
        );
        assert!(matches!(t.terminal, TerminalReason::BackendError { .. }));
        assert_eq!(b.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn budget_cuts_a_multi_call_batch_mid_way() {
        struct Batch;
        impl ModelBackend for Batch {
            fn backend_id(&self) -> &str {
                "scripted:batch"
            }
            fn complete(
                &self,
                _m: &[ChatMessage],
                _t: &[ToolSchema],
            ) -> Result<BackendResponse, BackendError> {
                Ok(BackendResponse::ToolCalls(
                    (0..3)
                        .map(|i| ToolCallRequest {
                            id: format!("c{i}"),
                            name: "get_newly_posted".into(),
                            arguments: json!({}),
                        })
                        .collect(),
                ))
            }
        }
        let (mut store, a) = fixture();
        let t = run_agent_turn(
            &mut store, &a, "sys", &Batch, TurnBudget::new(2), 0, &RetryPolicy::instant(),
        );
        assert_eq!(t.tool_calls.len(), 2);
        assert_eq!(t.terminal, TerminalReason::BudgetExhausted);
    }
}
