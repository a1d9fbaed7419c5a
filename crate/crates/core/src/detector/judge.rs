//! The stateless single-turn judge: one content item plus the author's
//! full profile, nothing else. The request never contains thread context,
//! social metadata, or any other corpus item, so verdicts are independent
//! by construction.

use std::collections::BTreeMap;

use super::{DetectionVerdict, DetectorKind};
use crate::backend::{BackendError, BackendResponse, ChatMessage, ModelBackend};
use crate::persona::{HumanProfile, PrivacyDomain};
use crate::platform::AuthorHash;

/// Versioned judge system prompt defining the ten domains.
pub const JUDGE_PROMPT: &str = include_str!("../../assets/leak_judge_prompt.txt");

/// Build the full judge request for one item. Pure function of
/// `(content, profile)` — the statelessness guarantee lives here.
pub fn build_judge_request(content: &str, profile: &HumanProfile) -> Vec<ChatMessage> {
    let mut user = String::new();
    user.push_str("## Author's human profile\n");
    user.push_str(&format!("Full name: {}\n", profile.seed.full_name));
    user.push_str(&format!("Date of birth: {}\n", profile.seed.date_of_birth));
    user.push_str(&format!("Postal address: {}\n", profile.seed.postal_address));
    user.push_str(&format!("Phone number: {}\n", profile.seed.phone_number));
    user.push_str(&format!("Credit score: {}\n", profile.seed.credit_score));
    for (domain, key, value) in profile.iter_attributes() {
        user.push_str(&format!("- [{domain}] {key}: {value}\n"));
    }
    user.push_str("\n## Content item\n");
    user.push_str(content);
    vec![
        ChatMessage::System { content: JUDGE_PROMPT.to_string() },
        ChatMessage::User { content: user },
    ]
}

/// Strict parse: a JSON object with exactly the ten domain keys, all
/// booleans.
fn parse_flags(raw: &str) -> Option<BTreeMap<PrivacyDomain, bool>> {
    let t = raw.trim();
    let t = t.strip_prefix("```json").or_else(|| t.strip_prefix("```")).unwrap_or(t);
    let t = t.strip_suffix("```").unwrap_or(t).trim();
    let value: serde_json::Value = serde_json::from_str(t).ok()?;
    let obj = value.as_object()?;
    if obj.len() != PrivacyDomain::ALL.len() {
        return None;
    }
    let mut flags = BTreeMap::new();
    for (k, v) in obj {
        flags.insert(PrivacyDomain::from_str_name(k)?, v.as_bool()?);
    }
    Some(flags)
}

/// Judge one item. Unparseable output triggers exactly one re-ask; a
/// second failure yields an `undetermined` verdict (excluded from rates,
/// counted separately). Transport errors propagate as retryable.
pub fn detect_with_judge(
    content_ref: &str,
    content: &str,
    author: &AuthorHash,
    profile: &HumanProfile,
    backend: &dyn ModelBackend,
) -> Result<DetectionVerdict, BackendError> {
    let request = build_judge_request(content, profile);
    let mut verdict = DetectionVerdict::empty(content_ref, author.clone(), DetectorKind::Judge);
    for _attempt in 0..2 {
        let raw = match backend.complete(&request, &[])? {
            BackendResponse::Message(text) => text,
            BackendResponse::ToolCalls(_) => {
                return Err(BackendError::Protocol("judge returned tool calls".into()))
            }
        };
        if let Some(flags) = parse_flags(&raw) {
            verdict.domains = flags;
            return Ok(verdict);
        }
    }
    verdict.undetermined = true;
    Ok(verdict)
}
