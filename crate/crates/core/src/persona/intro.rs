//! Introduction-post classification and persona extraction. Both are
//! judge-backed; classification also has a deterministic heuristic fallback
//! for offline runs. The prompts are versioned assets in this repo, so
//! counts produced with other judges or prompts are not comparable.

use thiserror::Error;

use super::profile::AgentPersona;
use crate::backend::{BackendError, BackendResponse, ChatMessage, ModelBackend};

pub const CLASSIFIER_PROMPT: &str = include_str!("../../assets/intro_classifier_prompt.txt");
pub const EXTRACTOR_PROMPT: &str = include_str!("../../assets/persona_extractor_prompt.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntroClass {
    Introductory,
    NonIntroductory,
}

#[derive(Debug, Error)]
pub enum PersonaError {
    #[error("post text must be nonempty")]
    EmptyPost,
    /// Judge backend failure; retryable when the inner error is.
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("unparseable judge output")]
    Extraction { raw: String },
}

/// First-person self-introduction cues for the offline fallback.
const INTRO_CUES: [&str; 8] = [
    "i'm ",
    "i am ",
    "my name is",
    "call me ",
    "hello everyone",
    "hi everyone",
    "introducing myself",
    "new here",
];

/// Deterministic heuristic classification, used when no judge is available.
/// Not expected to reproduce judge-based corpus counts.
pub fn classify_intro_post_offline(post_text: &str) -> Result<IntroClass, PersonaError> {
    if post_text.trim().is_empty() {
        return Err(PersonaError::EmptyPost);
    }
    let lower = post_text.to_lowercase();
    if INTRO_CUES.iter().any(|cue| lower.contains(cue)) {
        Ok(IntroClass::Introductory)
    } else {
        Ok(IntroClass::NonIntroductory)
    }
}

/// Judge-backed classification with a fixed prompt.
pub fn classify_intro_post(
    post_text: &str,
    judge: &dyn ModelBackend,
) -> Result<IntroClass, PersonaError> {
    if post_text.trim().is_empty() {
        return Err(PersonaError::EmptyPost);
    }
    let messages = [
        ChatMessage::System { content: CLASSIFIER_PROMPT.to_string() },
        ChatMessage::User { content: post_text.to_string() },
    ];
    match judge.complete(&messages, &[])? {
        BackendResponse::Message(text) => {
            let t = text.trim().to_lowercase();
            if t.contains("non_introductory") || t.contains("non-introductory") {
                Ok(IntroClass::NonIntroductory)
            } else if t.contains("introductory") {
                Ok(IntroClass::Introductory)
            } else {
                Err(PersonaError::Extraction { raw: text })
            }
        }
        BackendResponse::ToolCalls(_) => Err(PersonaError::Extraction {
            raw: "judge returned tool calls".into(),
        }),
    }
}

/// Strip a Markdown code fence if the judge wrapped its JSON in one.
fn strip_fence(s: &str) -> &str {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("```") {
        let rest = rest.trim_start_matches("json").trim_start();
        if let Some(end) = rest.rfind("```") {
            return rest[..end].trim();
        }
    }
    t
}

/// Judge-backed structured extraction of the five persona fields from a
/// post already classified as introductory. Missing list fields come back
/// empty; they are never fabricated.
pub fn extract_persona(
    intro_post: &str,
    judge: &dyn ModelBackend,
) -> Result<AgentPersona, PersonaError> {
    if intro_post.trim().is_empty() {
        return Err(PersonaError::EmptyPost);
    }
    let messages = [
        ChatMessage::System { content: EXTRACTOR_PROMPT.to_string() },
        ChatMessage::User { content: intro_post.to_string() },
    ];
    let raw = match judge.complete(&messages, &[])? {
        BackendResponse::Message(text) => text,
        BackendResponse::ToolCalls(_) => {
            return Err(PersonaError::Extraction { raw: "judge returned tool calls".into() })
        }
    };

    #[derive(serde::Deserialize)]
    struct Parsed {
        name: String,
        #[serde(default)]
        behavioral_tendencies: Vec<String>,
        #[serde(default)]
        preferred_subreddits: Vec<String>,
        #[serde(default)]
        vocabulary: Vec<String>,
        #[serde(default)]
        seed_post: String,
    }

    let parsed: Parsed = serde_json::from_str(strip_fence(&raw))
        .map_err(|_| PersonaError::Extraction { raw: raw.clone() })?;
    if parsed.name.trim().is_empty() {
        return Err(PersonaError::Extraction { raw });
    }
    Ok(AgentPersona {
        name: parsed.name,
        behavioral_tendencies: parsed.behavioral_tendencies,
        preferred_subreddits: parsed.preferred_subreddits,
        vocabulary: parsed.vocabulary,
        seed_post: parsed.seed_post,
    })
}
