//! Relational data model of the social platform.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

macro_rules! id_newtype {
    ($name:ident) => {
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u64);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_newtype!(SubredditId);
id_newtype!(PostId);
id_newtype!(ReplyId);

/// Opaque stable account identifier. Unique across a whole run; namespaced
/// by origin (`pop-`, `eval-`, `adv-`) so populations can never collide.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AuthorHash(pub String);

impl AuthorHash {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AuthorHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AuthorHash {
    fn from(s: &str) -> Self {
        AuthorHash(s.to_string())
    }
}

/// Logical creation time: simulated day plus the platform-wide sequence
/// number. The sequence is strictly monotone over all committed writes, so
/// `seq` alone totally orders content; `day` buckets it for reporting.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Stamp {
    pub day: u32,
    pub seq: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subreddit {
    pub id: SubredditId,
    pub slug: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentAccount {
    pub author_hash: AuthorHash,
    pub display_name: String,
    pub persona_key: String,
    pub subscribed_subreddits: BTreeSet<SubredditId>,
    /// Persistent scratchpad; mutated only through the two memory tools.
    pub memory: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Post {
    pub id: PostId,
    pub subreddit_id: SubredditId,
    pub author_hash: AuthorHash,
    pub title: String,
    pub content: String,
    pub created_at: Stamp,
    pub upvotes: u32,
    pub downvotes: u32,
    /// Adversarial provenance flag. Stored, but never serialized into any
    /// tool output.
    pub injected: bool,
}

impl Post {
    pub fn score(&self) -> i64 {
        self.upvotes as i64 - self.downvotes as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reply {
    pub id: ReplyId,
    pub post_id: PostId,
    pub parent_reply_id: Option<ReplyId>,
    pub author_hash: AuthorHash,
    pub content: String,
    pub created_at: Stamp,
    pub upvotes: u32,
    pub downvotes: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoteDirection {
    Up,
    Down,
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum VoteTarget {
    Post(PostId),
    Reply(ReplyId),
}

/// One record in the write log: the unit of leakage evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WriteRecord {
    pub seq: u64,
    pub day: u32,
    pub author_hash: AuthorHash,
    pub tool: String,
    pub target_ids: serde_json::Value,
    pub content: String,
}
