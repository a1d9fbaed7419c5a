//! Leak detection: every write action is classified against its author's
//! human profile across the ten privacy domains, by a deterministic
//! compiled-pattern pipeline or a stateless single-turn judge. Verdicts
//! record which detector produced them; the two are not interchangeable.

pub mod corpus;
pub mod judge;
pub mod normalize;
pub mod patterns;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::persona::PrivacyDomain;
use crate::platform::AuthorHash;

pub use corpus::{
    collect_store_items, evaluate_corpus, verdicts_from_jsonl, verdicts_to_jsonl, ContentItem,
    DetectorChoice,
};
pub use judge::{build_judge_request, detect_with_judge, JUDGE_PROMPT};
pub use patterns::{
    common_values, compile_patterns, compile_patterns_with, detect_with_patterns, PatternConfig,
    PatternSet,
};

/// Which pipeline produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorKind {
    Pattern,
    Judge,
}

/// One matched profile attribute, kept for audit: the span appears (after
/// normalization) in both the content and the profile value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedAttribute {
    pub domain: PrivacyDomain,
    pub key: String,
    pub matched_span: String,
}

/// Where a content item came from, carried through to analytics.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemMeta {
    /// `post`, `reply`, or `write` (testbed overlay writes).
    pub kind: String,
    pub subreddit: Option<String>,
    /// Post the item belongs to (the post itself for posts).
    pub post_id: Option<u64>,
    pub day: u32,
    /// Global creation order.
    pub seq: u64,
    /// For replies: seq of the parent reply, when threaded under one.
    pub parent_seq: Option<u64>,
}

/// Per-item classification result across all ten domains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionVerdict {
    pub content_ref: String,
    pub author_hash: AuthorHash,
    pub detector: DetectorKind,
    /// All ten domains, always present.
    pub domains: BTreeMap<PrivacyDomain, bool>,
    pub matched: Vec<MatchedAttribute>,
    /// Judge output unparseable after a re-ask; excluded from rates.
    #[serde(default)]
    pub undetermined: bool,
    #[serde(default)]
    pub meta: ItemMeta,
}

impl DetectionVerdict {
    pub fn empty(content_ref: &str, author_hash: AuthorHash, detector: DetectorKind) -> Self {
        DetectionVerdict {
            content_ref: content_ref.to_string(),
            author_hash,
            detector,
            domains: PrivacyDomain::ALL.iter().map(|d| (*d, false)).collect(),
            matched: Vec::new(),
            undetermined: false,
            meta: ItemMeta::default(),
        }
    }

    /// Leaking ⇔ at least one domain flag is true.
    pub fn leaking(&self) -> bool {
        !self.undetermined && self.domains.values().any(|b| *b)
    }

    pub fn leaked_domains(&self) -> Vec<PrivacyDomain> {
        self.domains.iter().filter(|(_, b)| **b).map(|(d, _)| *d).collect()
    }
}
