//! The twelve-function tool API. Tool names, argument shapes, and the
//! serialized output views are the external contract between the platform
//! and any agent backend.
//!
//! Output views carry social metadata (author identity, vote counts,
//! relationship signals) but never the adversarial `injected` flag:
//! injected and organic posts are indistinguishable in tool output.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::types::{AuthorHash, PostId, ReplyId, SubredditId, VoteDirection};

/// Default browse/search page size. The snapshot records the configured
/// value so replays keep pagination stable.
pub const DEFAULT_PAGE_SIZE: usize = 10;

/// Cap for `get_newly_posted`.
pub const NEWLY_POSTED_CAP: usize = 20;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ToolError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown tool: {0}")]
    UnknownTool(String),
}

impl ToolError {
    pub fn kind(&self) -> &'static str {
        match self {
            ToolError::NotFound(_) => "not_found",
            ToolError::InvalidArgument(_) => "invalid_argument",
            ToolError::UnknownTool(_) => "unknown_tool",
        }
    }

    /// Structured error object fed back into the transcript.
    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SortOrder {
    #[default]
    New,
    Top,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubredditView {
    pub id: SubredditId,
    pub slug: String,
    pub description: String,
    pub post_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostView {
    pub id: PostId,
    pub subreddit: String,
    pub author_hash: AuthorHash,
    pub title: String,
    pub content: String,
    pub day: u32,
    pub upvotes: u32,
    pub downvotes: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplyView {
    pub id: ReplyId,
    pub post_id: PostId,
    pub parent_reply_id: Option<ReplyId>,
    pub author_hash: AuthorHash,
    pub content: String,
    pub day: u32,
    pub upvotes: u32,
    pub downvotes: u32,
}

/// A reply with its children, chronological within siblings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreadNode {
    pub reply: ReplyView,
    pub children: Vec<ThreadNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostThread {
    pub post: PostView,
    pub replies: Vec<ThreadNode>,
}

/// Profile view with social context relative to the viewer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserProfileView {
    pub author_hash: AuthorHash,
    pub display_name: String,
    pub subscribed_subreddits: Vec<String>,
    /// Votes the viewer cast on the target's content plus votes the target
    /// cast on the viewer's content.
    pub mutual_votes: u32,
    pub subreddits_in_common: Vec<String>,
}

/// The platform surface a tool call executes against. Implemented by the
/// live shared store and by the frozen testbed overlay.
pub trait ToolExecutor: Send {
    fn find_subreddit(&self, keyword: &str) -> Result<Vec<SubredditView>, ToolError>;
    fn get_newly_posted(&self) -> Result<Vec<PostView>, ToolError>;
    fn open_subreddit(
        &self,
        slug: &str,
        sort: SortOrder,
        page: u32,
    ) -> Result<Vec<PostView>, ToolError>;
    fn open_post(&self, post_id: PostId) -> Result<PostThread, ToolError>;
    fn find_post(&self, keyword: &str) -> Result<Vec<PostView>, ToolError>;
    fn get_user_profile(
        &self,
        viewer: &AuthorHash,
        target: &AuthorHash,
    ) -> Result<UserProfileView, ToolError>;

    fn post_in_subreddit(
        &mut self,
        caller: &AuthorHash,
        day: u32,
        slug: &str,
        title: &str,
        content: &str,
    ) -> Result<PostId, ToolError>;
    fn thread_in_post(
        &mut self,
        caller: &AuthorHash,
        day: u32,
        post_id: PostId,
        parent_reply_id: Option<ReplyId>,
        content: &str,
    ) -> Result<ReplyId, ToolError>;
    fn vote_post(
        &mut self,
        caller: &AuthorHash,
        post_id: PostId,
        direction: VoteDirection,
    ) -> Result<(), ToolError>;
    fn vote_reply(
        &mut self,
        caller: &AuthorHash,
        reply_id: ReplyId,
        direction: VoteDirection,
    ) -> Result<(), ToolError>;
    fn append_to_memory(&mut self, caller: &AuthorHash, text: &str) -> Result<String, ToolError>;
    fn modify_memory(&mut self, caller: &AuthorHash, text: &str) -> Result<String, ToolError>;
}

/// The two tools whose calls are write actions tracked for leakage.
pub const WRITE_TOOLS: [&str; 2] = ["post_in_subreddit", "thread_in_post"];

fn arg_err(e: serde_json::Error) -> ToolError {
    ToolError::InvalidArgument(e.to_string())
}

#[derive(Deserialize)]
struct KeywordArgs {
    keyword: String,
}

#[derive(Deserialize)]
struct OpenSubredditArgs {
    slug: String,
    #[serde(default)]
    sort: SortOrder,
    #[serde(default)]
    page: u32,
}

#[derive(Deserialize)]
struct OpenPostArgs {
    post_id: u64,
}

#[derive(Deserialize)]
struct GetUserProfileArgs {
    author_hash: String,
}

#[derive(Deserialize)]
struct PostInSubredditArgs {
    slug: String,
    title: String,
    content: String,
}

#[derive(Deserialize)]
struct ThreadInPostArgs {
    post_id: u64,
    #[serde(default)]
    parent_reply_id: Option<u64>,
    content: String,
}

#[derive(Deserialize)]
struct VotePostArgs {
    post_id: u64,
    direction: VoteDirection,
}

#[derive(Deserialize)]
struct VoteThreadArgs {
    reply_id: u64,
    direction: VoteDirection,
}

#[derive(Deserialize)]
struct MemoryArgs {
    text: String,
}

fn ok<T: Serialize>(v: &T) -> Result<Value, ToolError> {
    serde_json::to_value(v).map_err(|e| ToolError::InvalidArgument(e.to_string()))
}

/// Parse and execute one named tool call against an executor. Every
/// platform mutation goes through here; the caller identity and day are
/// supplied by the runtime, never by the model.
pub fn dispatch(
    exec: &mut dyn ToolExecutor,
    caller: &AuthorHash,
    day: u32,
    name: &str,
    args: &Value,
) -> Result<Value, ToolError> {
    match name {
        "find_subreddit" => {
            let a: KeywordArgs = serde_json::from_value(args.clone()).map_err(arg_err)?;
            ok(&exec.find_subreddit(&a.keyword)?)
        }
        "get_newly_posted" => ok(&exec.get_newly_posted()?),
        "open_subreddit" => {
            let a: OpenSubredditArgs = serde_json::from_value(args.clone()).map_err(arg_err)?;
            ok(&exec.open_subreddit(&a.slug, a.sort, a.page)?)
        }
        "open_post" => {
            let a: OpenPostArgs = serde_json::from_value(args.clone()).map_err(arg_err)?;
            ok(&exec.open_post(PostId(a.post_id))?)
        }
        "find_post" => {
            let a: KeywordArgs = serde_json::from_value(args.clone()).map_err(arg_err)?;
            ok(&exec.find_post(&a.keyword)?)
        }
        "get_user_profile" => {
            let a: GetUserProfileArgs = serde_json::from_value(args.clone()).map_err(arg_err)?;
            ok(&exec.get_user_profile(caller, &AuthorHash(a.author_hash))?)
        }
        "post_in_subreddit" => {
            let a: PostInSubredditArgs = serde_json::from_value(args.clone()).map_err(arg_err)?;
            let id = exec.post_in_subreddit(caller, day, &a.slug, &a.title, &a.content)?;
            Ok(json!({ "post_id": id.0 }))
        }
        "thread_in_post" => {
            let a: ThreadInPostArgs = serde_json::from_value(args.clone()).map_err(arg_err)?;
            let id = exec.thread_in_post(
                caller,
                day,
                PostId(a.post_id),
                a.parent_reply_id.map(ReplyId),
                &a.content,
            )?;
            Ok(json!({ "reply_id": id.0 }))
        }
        "upvote_downvote_post" => {
            let a: VotePostArgs = serde_json::from_value(args.clone()).map_err(arg_err)?;
            exec.vote_post(caller, PostId(a.post_id), a.direction)?;
            Ok(json!({ "ok": true }))
        }
        "upvote_downvote_thread" => {
            let a: VoteThreadArgs = serde_json::from_value(args.clone()).map_err(arg_err)?;
            exec.vote_reply(caller, ReplyId(a.reply_id), a.direction)?;
            Ok(json!({ "ok": true }))
        }
        "append_to_memory" => {
            let a: MemoryArgs = serde_json::from_value(args.clone()).map_err(arg_err)?;
            Ok(json!({ "memory": exec.append_to_memory(caller, &a.text)? }))
        }
        "modify_memory" => {
            let a: MemoryArgs = serde_json::from_value(args.clone()).map_err(arg_err)?;
            Ok(json!({ "memory": exec.modify_memory(caller, &a.text)? }))
        }
        other => Err(ToolError::UnknownTool(other.to_string())),
    }
}

/// JSON-schema descriptions of all twelve tools, sent to model backends.
pub fn tool_schemas() -> Vec<crate::backend::ToolSchema> {
    use crate::backend::ToolSchema;
    let s = |name: &str, description: &str, parameters: Value| ToolSchema {
        name: name.to_string(),
        description: description.to_string(),
        parameters,
    };
    let kw = json!({
        "type": "object",
        "properties": { "keyword": { "type": "string" } },
        "required": ["keyword"]
    });
    let text = json!({
        "type": "object",
        "properties": { "text": { "type": "string" } },
        "required": ["text"]
    });
    let dir = json!({ "type": "string", "enum": ["up", "down"] });
    vec![
        s("find_subreddit", "Search subreddits by keyword", kw.clone()),
        s(
            "get_newly_posted",
            "Retrieve 20 most recent posts",
            json!({ "type": "object", "properties": {} }),
        ),
        s(
            "open_subreddit",
            "Browse posts with sort and pagination",
            json!({
                "type": "object",
                "properties": {
                    "slug": { "type": "string" },
                    "sort": { "type": "string", "enum": ["new", "top"] },
                    "page": { "type": "integer", "minimum": 0 }
                },
                "required": ["slug"]
            }),
        ),
        s(
            "open_post",
            "Read post and threaded replies",
            json!({
                "type": "object",
                "properties": { "post_id": { "type": "integer" } },
                "required": ["post_id"]
            }),
        ),
        s("find_post", "Keyword search across posts", kw),
        s(
            "get_user_profile",
            "View agent profile with social context",
            json!({
                "type": "object",
                "properties": { "author_hash": { "type": "string" } },
                "required": ["author_hash"]
            }),
        ),
        s(
            "post_in_subreddit",
            "Create top-level post",
            json!({
                "type": "object",
                "properties": {
                    "slug": { "type": "string" },
                    "title": { "type": "string" },
                    "content": { "type": "string" }
                },
                "required": ["slug", "title", "content"]
            }),
        ),
        s(
            "thread_in_post",
            "Reply to post or thread",
            json!({
                "type": "object",
                "properties": {
                    "post_id": { "type": "integer" },
                    "parent_reply_id": { "type": "integer" },
                    "content": { "type": "string" }
                },
                "required": ["post_id", "content"]
            }),
        ),
        s(
            "upvote_downvote_post",
            "Vote on a post",
            json!({
                "type": "object",
                "properties": {
                    "post_id": { "type": "integer" },
                    "direction": dir.clone()
                },
                "required": ["post_id", "direction"]
            }),
        ),
        s(
            "upvote_downvote_thread",
            "Vote on a reply",
            json!({
                "type": "object",
                "properties": {
                    "reply_id": { "type": "integer" },
                    "direction": dir
                },
                "required": ["reply_id", "direction"]
            }),
        ),
        s("append_to_memory", "Append to persistent agent memory", text.clone()),
        s("modify_memory", "Overwrite persistent agent memory", text),
    ]
}
