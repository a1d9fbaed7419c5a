//! The in-memory relational store behind the tool API.
//!
//! All tool calls are linearized through a single writer: callers wrap the
//! store in [`SharedStore`] and every call is atomic, so a read observes
//! all previously committed writes.

use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use super::tools::{
    PostThread, PostView, ReplyView, SortOrder, SubredditView, ThreadNode, ToolError,
    ToolExecutor, UserProfileView, DEFAULT_PAGE_SIZE, NEWLY_POSTED_CAP,
};
use super::types::{
    AgentAccount, AuthorHash, Post, PostId, Reply, ReplyId, Stamp, Subreddit, SubredditId,
    VoteDirection, VoteTarget, WriteRecord,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Store {
    pub(crate) subreddits: BTreeMap<SubredditId, Subreddit>,
    pub(crate) slug_index: BTreeMap<String, SubredditId>,
    pub(crate) accounts: BTreeMap<AuthorHash, AgentAccount>,
    pub(crate) posts: BTreeMap<PostId, Post>,
    pub(crate) replies: BTreeMap<ReplyId, Reply>,
    pub(crate) votes: BTreeMap<(AuthorHash, VoteTarget), VoteDirection>,
    pub(crate) write_log: Vec<WriteRecord>,
    pub(crate) meta: BTreeMap<String, String>,
    /// Monotone global sequence counter; also the id source for content.
    pub(crate) seq: u64,
    pub page_size: usize,
}

impl Default for Store {
    fn default() -> Self {
        Store::new()
    }
}

impl Store {
    pub fn new() -> Self {
        Store {
            subreddits: BTreeMap::new(),
            slug_index: BTreeMap::new(),
            accounts: BTreeMap::new(),
            posts: BTreeMap::new(),
            replies: BTreeMap::new(),
            votes: BTreeMap::new(),
            write_log: Vec::new(),
            meta: BTreeMap::new(),
            seq: 0,
            page_size: DEFAULT_PAGE_SIZE,
        }
    }

    pub fn next_seq(&mut self) -> u64 {
        self.seq += 1;
        self.seq
    }

    pub fn current_seq(&self) -> u64 {
        self.seq
    }

    pub fn meta(&self) -> &BTreeMap<String, String> {
        &self.meta
    }

    pub fn set_meta(&mut self, key: &str, value: &str) {
        self.meta.insert(key.to_string(), value.to_string());
    }

    pub fn write_log(&self) -> &[WriteRecord] {
        &self.write_log
    }

    pub fn subreddit_count(&self) -> usize {
        self.subreddits.len()
    }

    pub fn post_count(&self) -> usize {
        self.posts.len()
    }

    pub fn reply_count(&self) -> usize {
        self.replies.len()
    }

    pub fn posts(&self) -> impl Iterator<Item = &Post> {
        self.posts.values()
    }

    pub fn replies(&self) -> impl Iterator<Item = &Reply> {
        self.replies.values()
    }

    pub fn subreddits(&self) -> impl Iterator<Item = &Subreddit> {
        self.subreddits.values()
    }

    pub fn accounts(&self) -> impl Iterator<Item = &AgentAccount> {
        self.accounts.values()
    }

    pub fn account(&self, hash: &AuthorHash) -> Option<&AgentAccount> {
        self.accounts.get(hash)
    }

    pub fn post(&self, id: PostId) -> Option<&Post> {
        self.posts.get(&id)
    }

    pub fn reply(&self, id: ReplyId) -> Option<&Reply> {
        self.replies.get(&id)
    }

    pub fn subreddit_by_slug(&self, slug: &str) -> Option<&Subreddit> {
        self.slug_index.get(slug).and_then(|id| self.subreddits.get(id))
    }

    pub fn posts_in_subreddit(&self, id: SubredditId) -> impl Iterator<Item = &Post> {
        self.posts.values().filter(move |p| p.subreddit_id == id)
    }

    pub fn posts_in_subreddit_count(&self, id: SubredditId) -> usize {
        self.posts_in_subreddit(id).count()
    }

    // ---- population / setup ----

    pub fn create_subreddit(&mut self, slug: &str, description: &str) -> Result<SubredditId, ToolError> {
        if slug.is_empty() {
            return Err(ToolError::InvalidArgument("subreddit slug must be nonempty".into()));
        }
        if self.slug_index.contains_key(slug) {
            return Err(ToolError::InvalidArgument(format!("duplicate slug {slug:?}")));
        }
        let id = SubredditId(self.subreddits.len() as u64 + 1);
        self.subreddits.insert(
            id,
            Subreddit { id, slug: slug.to_string(), description: description.to_string() },
        );
        self.slug_index.insert(slug.to_string(), id);
        Ok(id)
    }

    pub fn create_account(
        &mut self,
        author_hash: AuthorHash,
        display_name: &str,
        persona_key: &str,
    ) -> Result<(), ToolError> {
        if self.accounts.contains_key(&author_hash) {
            return Err(ToolError::InvalidArgument(format!(
                "duplicate account {author_hash}"
            )));
        }
        self.accounts.insert(
            author_hash.clone(),
            AgentAccount {
                author_hash,
                display_name: display_name.to_string(),
                persona_key: persona_key.to_string(),
                subscribed_subreddits: BTreeSet::new(),
                memory: String::new(),
            },
        );
        Ok(())
    }

    pub fn subscribe(&mut self, account: &AuthorHash, subreddit: SubredditId) -> Result<(), ToolError> {
        if !self.subreddits.contains_key(&subreddit) {
            return Err(ToolError::NotFound(format!("subreddit id {subreddit}")));
        }
        let acc = self
            .accounts
            .get_mut(account)
            .ok_or_else(|| ToolError::NotFound(format!("account {account}")))?;
        acc.subscribed_subreddits.insert(subreddit);
        Ok(())
    }

    /// Insert a fully-formed post directly (adversarial injection and
    /// fixture loading). Consumes a sequence number like any other write,
    /// but does not touch the write log.
    pub fn insert_post_raw(
        &mut self,
        day: u32,
        subreddit_id: SubredditId,
        author_hash: AuthorHash,
        title: &str,
        content: &str,
        upvotes: u32,
        injected: bool,
    ) -> PostId {
        let seq = self.next_seq();
        let id = PostId(seq);
        self.posts.insert(
            id,
            Post {
                id,
                subreddit_id,
                author_hash,
                title: title.to_string(),
                content: content.to_string(),
                created_at: Stamp { day, seq },
                upvotes,
                downvotes: 0,
                injected,
            },
        );
        id
    }

    // ---- read queries ----

    fn post_view(&self, p: &Post) -> PostView {
        let slug = self
            .subreddits
            .get(&p.subreddit_id)
            .map(|s| s.slug.clone())
            .unwrap_or_default();
        PostView {
            id: p.id,
            subreddit: slug,
            author_hash: p.author_hash.clone(),
            title: p.title.clone(),
            content: p.content.clone(),
            day: p.created_at.day,
            upvotes: p.upvotes,
            downvotes: p.downvotes,
        }
    }

    fn reply_view(&self, r: &Reply) -> ReplyView {
        ReplyView {
            id: r.id,
            post_id: r.post_id,
            parent_reply_id: r.parent_reply_id,
            author_hash: r.author_hash.clone(),
            content: r.content.clone(),
            day: r.created_at.day,
            upvotes: r.upvotes,
            downvotes: r.downvotes,
        }
    }

    pub fn query_find_subreddit(&self, keyword: &str) -> Result<Vec<SubredditView>, ToolError> {
        if keyword.is_empty() {
            return Err(ToolError::InvalidArgument("keyword must be nonempty".into()));
        }
        let kw = keyword.to_lowercase();
        let mut hits: Vec<(usize, &Subreddit)> = self
            .subreddits
            .values()
            .filter_map(|s| {
                // slug matches rank ahead of description matches
                let pos = s
                    .slug
                    .to_lowercase()
                    .find(&kw)
                    .or_else(|| s.description.to_lowercase().find(&kw).map(|p| p + 1_000_000));
                pos.map(|p| (p, s))
            })
            .collect();
        hits.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.slug.cmp(&b.1.slug)));
        Ok(hits
            .into_iter()
            .map(|(_, s)| SubredditView {
                id: s.id,
                slug: s.slug.clone(),
                description: s.description.clone(),
                post_count: self.posts_in_subreddit_count(s.id),
            })
            .collect())
    }

    pub fn query_newly_posted(&self) -> Vec<PostView> {
        let mut posts: Vec<&Post> = self.posts.values().collect();
        posts.sort_by(|a, b| b.created_at.cmp(&a.created_at));
        posts.into_iter().take(NEWLY_POSTED_CAP).map(|p| self.post_view(p)).collect()
    }

    pub fn query_open_subreddit(
        &self,
        slug: &str,
        sort: SortOrder,
        page: u32,
    ) -> Result<Vec<PostView>, ToolError> {
        let sub = self
            .subreddit_by_slug(slug)
            .ok_or_else(|| ToolError::NotFound(format!("subreddit {slug:?}")))?;
        let mut posts: Vec<&Post> = self.posts_in_subreddit(sub.id).collect();
        match sort {
            SortOrder::New => posts.sort_by(|a, b| b.created_at.cmp(&a.created_at)),
            SortOrder::Top => posts.sort_by(|a, b| {
                b.score().cmp(&a.score()).then_with(|| b.created_at.cmp(&a.created_at))
            }),
        }
        Ok(posts
            .into_iter()
            .skip(page as usize * self.page_size)
            .take(self.page_size)
            .map(|p| self.post_view(p))
            .collect())
    }

    pub fn query_open_post(&self, post_id: PostId) -> Result<PostThread, ToolError> {
        let post = self
            .posts
            .get(&post_id)
            .ok_or_else(|| ToolError::NotFound(format!("post {post_id}")))?;
        let mut children: BTreeMap<Option<ReplyId>, Vec<&Reply>> = BTreeMap::new();
        for r in self.replies.values().filter(|r| r.post_id == post_id) {
            children.entry(r.parent_reply_id).or_default().push(r);
        }
        for siblings in children.values_mut() {
            siblings.sort_by_key(|r| r.created_at);
        }
        fn build(
            store: &Store,
            children: &BTreeMap<Option<ReplyId>, Vec<&Reply>>,
            parent: Option<ReplyId>,
        ) -> Vec<ThreadNode> {
            children
                .get(&parent)
                .map(|siblings| {
                    siblings
                        .iter()
                        .map(|r| ThreadNode {
                            reply: store.reply_view(r),
                            children: build(store, children, Some(r.id)),
                        })
                        .collect()
                })
                .unwrap_or_default()
        }
        Ok(PostThread { post: self.post_view(post), replies: build(self, &children, None) })
    }

    pub fn query_find_post(&self, keyword: &str) -> Result<Vec<PostView>, ToolError> {
        if keyword.is_empty() {
            return Err(ToolError::InvalidArgument("keyword must be nonempty".into()));
        }
        let kw = keyword.to_lowercase();
        let mut hits: Vec<(usize, &Post)> = self
            .posts
            .values()
            .filter_map(|p| {
                let pos = p
                    .title
                    .to_lowercase()
                    .find(&kw)
                    .or_else(|| p.content.to_lowercase().find(&kw).map(|x| x + 1_000_000));
                pos.map(|x| (x, p))
            })
            .collect();
        hits.sort_by(|a, b| {
            a.0.cmp(&b.0).then_with(|| b.1.created_at.cmp(&a.1.created_at))
        });
        Ok(hits
            .into_iter()
            .take(self.page_size)
            .map(|(_, p)| self.post_view(p))
            .collect())
    }

    pub fn query_user_profile(
        &self,
        viewer: &AuthorHash,
        target: &AuthorHash,
    ) -> Result<UserProfileView, ToolError> {
        let acc = self
            .accounts
            .get(target)
            .ok_or_else(|| ToolError::NotFound(format!("account {target}")))?;
        let slug_of = |id: &SubredditId| {
            self.subreddits.get(id).map(|s| s.slug.clone()).unwrap_or_default()
        };
        let subscribed: Vec<String> = acc.subscribed_subreddits.iter().map(slug_of).collect();
        let common: Vec<String> = match self.accounts.get(viewer) {
            Some(v) => v
                .subscribed_subreddits
                .intersection(&acc.subscribed_subreddits)
                .map(slug_of)
                .collect(),
            None => Vec::new(),
        };
        let mutual = self.mutual_votes(viewer, target);
        Ok(UserProfileView {
            author_hash: acc.author_hash.clone(),
            display_name: acc.display_name.clone(),
            subscribed_subreddits: subscribed,
            mutual_votes: mutual,
            subreddits_in_common: common,
        })
    }

    fn author_of(&self, target: &VoteTarget) -> Option<&AuthorHash> {
        match target {
            VoteTarget::Post(id) => self.posts.get(id).map(|p| &p.author_hash),
            VoteTarget::Reply(id) => self.replies.get(id).map(|r| &r.author_hash),
        }
    }

    /// Votes the viewer cast on the target's content plus votes the target
    /// cast on the viewer's content.
    fn mutual_votes(&self, a: &AuthorHash, b: &AuthorHash) -> u32 {
        self.votes
            .keys()
            .filter(|(voter, target)| {
                let author = self.author_of(target);
                (voter == a && author == Some(b)) || (voter == b && author == Some(a))
            })
            .count() as u32
    }

    // ---- writes ----

    fn log_write(&mut self, record: WriteRecord) {
        self.write_log.push(record);
    }

    pub fn commit_post(
        &mut self,
        caller: &AuthorHash,
        day: u32,
        slug: &str,
        title: &str,
        content: &str,
    ) -> Result<PostId, ToolError> {
        if content.is_empty() {
            return Err(ToolError::InvalidArgument("content must be nonempty".into()));
        }
        let sub_id = self
            .subreddit_by_slug(slug)
            .map(|s| s.id)
            .ok_or_else(|| ToolError::NotFound(format!("subreddit {slug:?}")))?;
        let seq = self.next_seq();
        let id = PostId(seq);
        self.posts.insert(
            id,
            Post {
                id,
                subreddit_id: sub_id,
                author_hash: caller.clone(),
                title: title.to_string(),
                content: content.to_string(),
                created_at: Stamp { day, seq },
                upvotes: 0,
                downvotes: 0,
                injected: false,
            },
        );
        self.log_write(WriteRecord {
            seq,
            day,
            author_hash: caller.clone(),
            tool: "post_in_subreddit".into(),
            target_ids: json!({ "subreddit": slug, "post_id": id.0 }),
            content: content.to_string(),
        });
        Ok(id)
    }

    pub fn commit_reply(
        &mut self,
        caller: &AuthorHash,
        day: u32,
        post_id: PostId,
        parent_reply_id: Option<ReplyId>,
        content: &str,
    ) -> Result<ReplyId, ToolError> {
        if content.is_empty() {
            return Err(ToolError::InvalidArgument("content must be nonempty".into()));
        }
        if !self.posts.contains_key(&post_id) {
            return Err(ToolError::NotFound(format!("post {post_id}")));
        }
        if let Some(parent) = parent_reply_id {
            match self.replies.get(&parent) {
                Some(r) if r.post_id == post_id => {}
                Some(_) => {
                    return Err(ToolError::InvalidArgument(format!(
                        "reply {parent} belongs to a different post"
                    )))
                }
                None => return Err(ToolError::NotFound(format!("reply {parent}"))),
            }
        }
        let seq = self.next_seq();
        let id = ReplyId(seq);
        self.replies.insert(
            id,
            Reply {
                id,
                post_id,
                parent_reply_id,
                author_hash: caller.clone(),
                content: content.to_string(),
                created_at: Stamp { day, seq },
                upvotes: 0,
                downvotes: 0,
            },
        );
        self.log_write(WriteRecord {
            seq,
            day,
            author_hash: caller.clone(),
            tool: "thread_in_post".into(),
            target_ids: json!({
                "post_id": post_id.0,
                "parent_reply_id": parent_reply_id.map(|r| r.0),
                "reply_id": id.0
            }),
            content: content.to_string(),
        });
        Ok(id)
    }

    /// Re-voting overwrites direction; one vote per (voter, target).
    pub fn commit_vote(
        &mut self,
        caller: &AuthorHash,
        target: VoteTarget,
        direction: VoteDirection,
    ) -> Result<(), ToolError> {
        match target {
            VoteTarget::Post(id) if !self.posts.contains_key(&id) => {
                return Err(ToolError::NotFound(format!("post {id}")))
            }
            VoteTarget::Reply(id) if !self.replies.contains_key(&id) => {
                return Err(ToolError::NotFound(format!("reply {id}")))
            }
            _ => {}
        }
        let prev = self.votes.insert((caller.clone(), target), direction);
        if prev == Some(direction) {
            return Ok(()); // idempotent
        }
        let (up_delta, down_delta): (i64, i64) = match (prev, direction) {
            (None, VoteDirection::Up) => (1, 0),
            (None, VoteDirection::Down) => (0, 1),
            (Some(VoteDirection::Down), VoteDirection::Up) => (1, -1),
            (Some(VoteDirection::Up), VoteDirection::Down) => (-1, 1),
            _ => (0, 0),
        };
        let apply = |up: &mut u32, down: &mut u32| {
            *up = (*up as i64 + up_delta).max(0) as u32;
            *down = (*down as i64 + down_delta).max(0) as u32;
        };
        match target {
            VoteTarget::Post(id) => {
                let p = self.posts.get_mut(&id).unwrap();
                apply(&mut p.upvotes, &mut p.downvotes);
            }
            VoteTarget::Reply(id) => {
                let r = self.replies.get_mut(&id).unwrap();
                apply(&mut r.upvotes, &mut r.downvotes);
            }
        }
        Ok(())
    }

    pub fn commit_append_memory(
        &mut self,
        caller: &AuthorHash,
        text: &str,
    ) -> Result<String, ToolError> {
        let acc = self
            .accounts
            .get_mut(caller)
            .ok_or_else(|| ToolError::NotFound(format!("account {caller}")))?;
        if acc.memory.is_empty() {
            acc.memory = text.to_string();
        } else {
            acc.memory.push('\n');
            acc.memory.push_str(text);
        }
        Ok(acc.memory.clone())
    }

    pub fn commit_modify_memory(
        &mut self,
        caller: &AuthorHash,
        text: &str,
    ) -> Result<String, ToolError> {
        let acc = self
            .accounts
            .get_mut(caller)
            .ok_or_else(|| ToolError::NotFound(format!("account {caller}")))?;
        acc.memory = text.to_string();
        Ok(acc.memory.clone())
    }
}

impl ToolExecutor for Store {
    fn find_subreddit(&self, keyword: &str) -> Result<Vec<SubredditView>, ToolError> {
        self.query_find_subreddit(keyword)
    }
    fn get_newly_posted(&self) -> Result<Vec<PostView>, ToolError> {
        Ok(self.query_newly_posted())
    }
    fn open_subreddit(
        &self,
        slug: &str,
        sort: SortOrder,
        page: u32,
    ) -> Result<Vec<PostView>, ToolError> {
        self.query_open_subreddit(slug, sort, page)
    }
    fn open_post(&self, post_id: PostId) -> Result<PostThread, ToolError> {
        self.query_open_post(post_id)
    }
    fn find_post(&self, keyword: &str) -> Result<Vec<PostView>, ToolError> {
        self.query_find_post(keyword)
    }
    fn get_user_profile(
        &self,
        viewer: &AuthorHash,
        target: &AuthorHash,
    ) -> Result<UserProfileView, ToolError> {
        self.query_user_profile(viewer, target)
    }
    fn post_in_subreddit(
        &mut self,
        caller: &AuthorHash,
        day: u32,
        slug: &str,
        title: &str,
        content: &str,
    ) -> Result<PostId, ToolError> {
        self.commit_post(caller, day, slug, title, content)
    }
    fn thread_in_post(
        &mut self,
        caller: &AuthorHash,
        day: u32,
        post_id: PostId,
        parent_reply_id: Option<ReplyId>,
        content: &str,
    ) -> Result<ReplyId, ToolError> {
        self.commit_reply(caller, day, post_id, parent_reply_id, content)
    }
    fn vote_post(
        &mut self,
        caller: &AuthorHash,
        post_id: PostId,
        direction: VoteDirection,
    ) -> Result<(), ToolError> {
        self.commit_vote(caller, VoteTarget::Post(post_id), direction)
    }
    fn vote_reply(
        &mut self,
        caller: &AuthorHash,
        reply_id: ReplyId,
        direction: VoteDirection,
    ) -> Result<(), ToolError> {
        self.commit_vote(caller, VoteTarget::Reply(reply_id), direction)
    }
    fn append_to_memory(&mut self, caller: &AuthorHash, text: &str) -> Result<String, ToolError> {
        self.commit_append_memory(caller, text)
    }
    fn modify_memory(&mut self, caller: &AuthorHash, text: &str) -> Result<String, ToolError> {
        self.commit_modify_memory(caller, text)
    }
}

/// Mutex-serialized handle to a live store; the single total order for all
/// concurrent agent tasks.
#[derive(Clone)]
pub struct SharedStore(Arc<Mutex<Store>>);

impl SharedStore {
    pub fn new(store: Store) -> Self {
        SharedStore(Arc::new(Mutex::new(store)))
    }

    pub fn with<T>(&self, f: impl FnOnce(&Store) -> T) -> T {
        f(&self.0.lock().unwrap())
    }

    pub fn with_mut<T>(&self, f: impl FnOnce(&mut Store) -> T) -> T {
        f(&mut self.0.lock().unwrap())
    }

    /// Take the store back out; panics if other handles are still alive.
    pub fn into_inner(self) -> Store {
        Arc::try_unwrap(self.0)
            .expect("other SharedStore handles still alive")
            .into_inner()
            .unwrap()
    }
}

impl ToolExecutor for SharedStore {
    fn find_subreddit(&self, keyword: &str) -> Result<Vec<SubredditView>, ToolError> {
        self.with(|s| s.query_find_subreddit(keyword))
    }
    fn get_newly_posted(&self) -> Result<Vec<PostView>, ToolError> {
        self.with(|s| Ok(s.query_newly_posted()))
    }
    fn open_subreddit(
        &self,
        slug: &str,
        sort: SortOrder,
        page: u32,
    ) -> Result<Vec<PostView>, ToolError> {
        self.with(|s| s.query_open_subreddit(slug, sort, page))
    }
    fn open_post(&self, post_id: PostId) -> Result<PostThread, ToolError> {
        self.with(|s| s.query_open_post(post_id))
    }
    fn find_post(&self, keyword: &str) -> Result<Vec<PostView>, ToolError> {
        self.with(|s| s.query_find_post(keyword))
    }
    fn get_user_profile(
        &self,
        viewer: &AuthorHash,
        target: &AuthorHash,
    ) -> Result<UserProfileView, ToolError> {
        self.with(|s| s.query_user_profile(viewer, target))
    }
    fn post_in_subreddit(
        &mut self,
        caller: &AuthorHash,
        day: u32,
        slug: &str,
        title: &str,
        content: &str,
    ) -> Result<PostId, ToolError> {
        self.with_mut(|s| s.commit_post(caller, day, slug, title, content))
    }
    fn thread_in_post(
        &mut self,
        caller: &AuthorHash,
        day: u32,
        post_id: PostId,
        parent_reply_id: Option<ReplyId>,
        content: &str,
    ) -> Result<ReplyId, ToolError> {
        self.with_mut(|s| s.commit_reply(caller, day, post_id, parent_reply_id, content))
    }
    fn vote_post(
        &mut self,
        caller: &AuthorHash,
        post_id: PostId,
        direction: VoteDirection,
    ) -> Result<(), ToolError> {
        self.with_mut(|s| s.commit_vote(caller, VoteTarget::Post(post_id), direction))
    }
    fn vote_reply(
        &mut self,
        caller: &AuthorHash,
        reply_id: ReplyId,
        direction: VoteDirection,
    ) -> Result<(), ToolError> {
        self.with_mut(|s| s.commit_vote(caller, VoteTarget::Reply(reply_id), direction))
    }
    fn append_to_memory(&mut self, caller: &AuthorHash, text: &str) -> Result<String, ToolError> {
        self.with_mut(|s| s.commit_append_memory(caller, text))
    }
    fn modify_memory(&mut self, caller: &AuthorHash, text: &str) -> Result<String, ToolError> {
        self.with_mut(|s| s.commit_modify_memory(caller, text))
    }
}
