//! Snapshot persistence: a single-file SQLite database for platform state
//! (tables: subreddits, accounts, posts, replies, votes, memories, meta)
//! plus a portable JSONL export, one table-tagged object per row, for
//! diffing and fixtures. The JSONL export is canonical: export → import →
//! export round-trips byte-for-byte.

use rusqlite::Connection;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::path::Path;
use thiserror::Error;

use super::store::Store;
use super::types::{
    AgentAccount, AuthorHash, Post, PostId, Reply, ReplyId, Stamp, Subreddit, SubredditId,
    VoteDirection, VoteTarget, WriteRecord,
};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("database error: {0}")]
    Db(#[from] rusqlite::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed snapshot: {0}")]
    Malformed(String),
}

fn vote_target(kind: &str, id: u64) -> Result<VoteTarget, SnapshotError> {
    match kind {
        "post" => Ok(VoteTarget::Post(PostId(id))),
        "reply" => Ok(VoteTarget::Reply(ReplyId(id))),
        other => Err(SnapshotError::Malformed(format!("vote target kind {other:?}"))),
    }
}

fn direction_str(d: VoteDirection) -> &'static str {
    match d {
        VoteDirection::Up => "up",
        VoteDirection::Down => "down",
    }
}

fn parse_direction(s: &str) -> Result<VoteDirection, SnapshotError> {
    match s {
        "up" => Ok(VoteDirection::Up),
        "down" => Ok(VoteDirection::Down),
        other => Err(SnapshotError::Malformed(format!("vote direction {other:?}"))),
    }
}

/// Write the store to a single-file SQLite database, replacing any existing
/// file at `path`.
pub fn save(store: &Store, path: &Path) -> Result<(), SnapshotError> {
    if path.exists() {
        std::fs::remove_file(path)?;
    }
    let mut conn = Connection::open(path)?;
    conn.execute_batch(
        "CREATE TABLE meta(key TEXT PRIMARY KEY, value TEXT NOT NULL);
         CREATE TABLE subreddits(
             id INTEGER PRIMARY KEY, slug TEXT NOT NULL UNIQUE, description TEXT NOT NULL);
         CREATE TABLE accounts(
             author_hash TEXT PRIMARY KEY, display_name TEXT NOT NULL,
             persona_key TEXT NOT NULL, subscribed TEXT NOT NULL);
         CREATE TABLE memories(author_hash TEXT PRIMARY KEY, text TEXT NOT NULL);
         CREATE TABLE posts(
             id INTEGER PRIMARY KEY, subreddit_id INTEGER NOT NULL,
             author_hash TEXT NOT NULL, title TEXT NOT NULL, content TEXT NOT NULL,
             day INTEGER NOT NULL, seq INTEGER NOT NULL,
             upvotes INTEGER NOT NULL, downvotes INTEGER NOT NULL,
             injected INTEGER NOT NULL);
         CREATE TABLE replies(
             id INTEGER PRIMARY KEY, post_id INTEGER NOT NULL,
             parent_reply_id INTEGER, author_hash TEXT NOT NULL,
             content TEXT NOT NULL, day INTEGER NOT NULL, seq INTEGER NOT NULL,
             upvotes INTEGER NOT NULL, downvotes INTEGER NOT NULL);
         CREATE TABLE votes(
             voter_hash TEXT NOT NULL, target_kind TEXT NOT NULL,
             target_id INTEGER NOT NULL, direction TEXT NOT NULL,
             PRIMARY KEY(voter_hash, target_kind, target_id));",
    )?;
    let tx = conn.transaction()?;
    {
        let mut ins = tx.prepare("INSERT INTO meta(key, value) VALUES (?1, ?2)")?;
        ins.execute(("format_version", FORMAT_VERSION))?;
        ins.execute(("seq", store.current_seq().to_string()))?;
        ins.execute(("page_size", store.page_size.to_string()))?;
        for (k, v) in store.meta() {
            ins.execute((k.as_str(), v.as_str()))?;
        }

        let mut ins =
            tx.prepare("INSERT INTO subreddits(id, slug, description) VALUES (?1, ?2, ?3)")?;
        for s in store.subreddits() {
            ins.execute((s.id.0, s.slug.as_str(), s.description.as_str()))?;
        }

        let mut ins = tx.prepare(
            "INSERT INTO accounts(author_hash, display_name, persona_key, subscribed)
             VALUES (?1, ?2, ?3, ?4)",
        )?;
        let mut mem = tx.prepare("INSERT INTO memories(author_hash, text) VALUES (?1, ?2)")?;
        for a in store.accounts() {
            let subscribed: Vec<u64> = a.subscribed_subreddits.iter().map(|s| s.0).collect();
            ins.execute((
                a.author_hash.as_str(),
                a.display_name.as_str(),
                a.persona_key.as_str(),
                serde_json::to_string(&subscribed).unwrap(),
            ))?;
            mem.execute((a.author_hash.as_str(), a.memory.as_str()))?;
        }

        let mut ins = tx.prepare(
            "INSERT INTO posts(id, subreddit_id, author_hash, title, content, day, seq,
                               upvotes, downvotes, injected)
             VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9, ?10)",
        )?;
        for p in store.posts() {
            ins.execute((
                p.id.0,
                p.subreddit_id.0,
                p.author_hash.as_str(),
                p.title.as_str(),
                p.content.as_str(),
                p.created_at.day,
                p.created_at.seq,
                p.upvotes,
                p.downvotes,
                p.injected as i64,
            ))?;
        }

        let mut ins = tx.prepare(
            "INSERT INTO replies(id, post_id, parent_reply_id, author_hash, content, day, seq,
                                 upvotes, downvotes)
             VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9)",
        )?;
        for r in store.replies() {
            ins.execute((
                r.id.0,
                r.post_id.0,
                r.parent_reply_id.map(|x| x.0),
                r.author_hash.as_str(),
                r.content.as_str(),
                r.created_at.day,
                r.created_at.seq,
                r.upvotes,
                r.downvotes,
            ))?;
        }

        let mut ins = tx.prepare(
            "INSERT INTO votes(voter_hash, target_kind, target_id, direction)
             VALUES (?1, ?2, ?3, ?4)",
        )?;
        for ((voter, target), dir) in &store.votes {
            let (kind, id) = match target {
                VoteTarget::Post(p) => ("post", p.0),
                VoteTarget::Reply(r) => ("reply", r.0),
            };
            ins.execute((voter.as_str(), kind, id, direction_str(*dir)))?;
        }
    }
    tx.commit()?;
    Ok(())
}

/// Load a store from a SQLite snapshot file.
pub fn load(path: &Path) -> Result<Store, SnapshotError> {
    let conn = Connection::open_with_flags(
        path,
        rusqlite::OpenFlags::SQLITE_OPEN_READ_ONLY,
    )?;
    let mut store = Store::new();

    let mut stmt = conn.prepare("SELECT key, value FROM meta")?;
    let rows = stmt.query_map([], |r| Ok((r.get::<_, String>(0)?, r.get::<_, String>(1)?)))?;
    for row in rows {
        let (k, v) = row?;
        match k.as_str() {
            "format_version" => {
                if v != FORMAT_VERSION {
                    return Err(SnapshotError::Malformed(format!("format version {v:?}")));
                }
            }
            "seq" => {
                store.seq = v
                    .parse()
                    .map_err(|_| SnapshotError::Malformed(format!("seq {v:?}")))?
            }
            "page_size" => {
                store.page_size = v
                    .parse()
                    .map_err(|_| SnapshotError::Malformed(format!("page_size {v:?}")))?
            }
            _ => {
                store.meta.insert(k, v);
            }
        }
    }

    let mut stmt = conn.prepare("SELECT id, slug, description FROM subreddits ORDER BY id")?;
    let rows = stmt.query_map([], |r| {
        Ok(Subreddit {
            id: SubredditId(r.get(0)?),
            slug: r.get(1)?,
            description: r.get(2)?,
        })
    })?;
    for row in rows {
        let s = row?;
        store.slug_index.insert(s.slug.clone(), s.id);
        store.subreddits.insert(s.id, s);
    }

    let mut stmt = conn.prepare(
        "SELECT a.author_hash, a.display_name, a.persona_key, a.subscribed,
                COALESCE(m.text, '')
         FROM accounts a LEFT JOIN memories m ON m.author_hash = a.author_hash",
    )?;
    let rows = stmt.query_map([], |r| {
        Ok((
            r.get::<_, String>(0)?,
            r.get::<_, String>(1)?,
            r.get::<_, String>(2)?,
            r.get::<_, String>(3)?,
            r.get::<_, String>(4)?,
        ))
    })?;
    for row in rows {
        let (hash, display_name, persona_key, subscribed, memory) = row?;
        let subs: Vec<u64> = serde_json::from_str(&subscribed)
            .map_err(|e| SnapshotError::Malformed(format!("subscribed list: {e}")))?;
        store.accounts.insert(
            AuthorHash(hash.clone()),
            AgentAccount {
                author_hash: AuthorHash(hash),
                display_name,
                persona_key,
                subscribed_subreddits: subs.into_iter().map(SubredditId).collect::<BTreeSet<_>>(),
                memory,
            },
        );
    }

    let mut stmt = conn.prepare(
        "SELECT id, subreddit_id, author_hash, title, content, day, seq, upvotes, downvotes,
                injected
         FROM posts ORDER BY id",
    )?;
    let rows = stmt.query_map([], |r| {
        Ok(Post {
            id: PostId(r.get(0)?),
            subreddit_id: SubredditId(r.get(1)?),
            author_hash: AuthorHash(r.get(2)?),
            title: r.get(3)?,
            content: r.get(4)?,
            created_at: Stamp { day: r.get(5)?, seq: r.get(6)? },
            upvotes: r.get(7)?,
            downvotes: r.get(8)?,
            injected: r.get::<_, i64>(9)? != 0,
        })
    })?;
    for row in rows {
        let p = row?;
        store.posts.insert(p.id, p);
    }

    let mut stmt = conn.prepare(
        "SELECT id, post_id, parent_reply_id, author_hash, content, day, seq, upvotes, downvotes
         FROM replies ORDER BY id",
    )?;
    let rows = stmt.query_map([], |r| {
        Ok(Reply {
            id: ReplyId(r.get(0)?),
            post_id: PostId(r.get(1)?),
            parent_reply_id: r.get::<_, Option<u64>>(2)?.map(ReplyId),
            author_hash: AuthorHash(r.get(3)?),
            content: r.get(4)?,
            created_at: Stamp { day: r.get(5)?, seq: r.get(6)? },
            upvotes: r.get(7)?,
            downvotes: r.get(8)?,
        })
    })?;
    for row in rows {
        let r = row?;
        store.replies.insert(r.id, r);
    }

    let mut stmt = conn.prepare(
        "SELECT voter_hash, target_kind, target_id, direction FROM votes
         ORDER BY voter_hash, target_kind, target_id",
    )?;
    let rows = stmt.query_map([], |r| {
        Ok((
            r.get::<_, String>(0)?,
            r.get::<_, String>(1)?,
            r.get::<_, u64>(2)?,
            r.get::<_, String>(3)?,
        ))
    })?;
    for row in rows {
        let (voter, kind, id, dir) = row?;
        store.votes.insert(
            (AuthorHash(voter), vote_target(&kind, id)?),
            parse_direction(&dir)?,
        );
    }

    Ok(store)
}

/// Portable JSONL export: one object per row, table-tagged, rows in
/// primary-key order.
pub fn export_jsonl(store: &Store) -> String {
    let mut lines: Vec<String> = Vec::new();
    let mut push = |v: Value| lines.push(v.to_string());

    push(json!({ "table": "meta", "key": "format_version", "value": FORMAT_VERSION }));
    push(json!({ "table": "meta", "key": "seq", "value": store.current_seq().to_string() }));
    push(json!({ "table": "meta", "key": "page_size", "value": store.page_size.to_string() }));
    for (k, v) in store.meta() {
        push(json!({ "table": "meta", "key": k, "value": v }));
    }
    for s in store.subreddits() {
        push(json!({
            "table": "subreddits", "id": s.id.0, "slug": s.slug, "description": s.description
        }));
    }
    for a in store.accounts() {
        let subs: Vec<u64> = a.subscribed_subreddits.iter().map(|s| s.0).collect();
        push(json!({
            "table": "accounts", "author_hash": a.author_hash.as_str(),
            "display_name": a.display_name, "persona_key": a.persona_key,
            "subscribed": subs
        }));
    }
    for a in store.accounts() {
        push(json!({
            "table": "memories", "author_hash": a.author_hash.as_str(), "text": a.memory
        }));
    }
    for p in store.posts() {
        push(json!({
            "table": "posts", "id": p.id.0, "subreddit_id": p.subreddit_id.0,
            "author_hash": p.author_hash.as_str(), "title": p.title, "content": p.content,
            "day": p.created_at.day, "seq": p.created_at.seq,
            "upvotes": p.upvotes, "downvotes": p.downvotes, "injected": p.injected
        }));
    }
    for r in store.replies() {
        push(json!({
            "table": "replies", "id": r.id.0, "post_id": r.post_id.0,
            "parent_reply_id": r.parent_reply_id.map(|x| x.0),
            "author_hash": r.author_hash.as_str(), "content": r.content,
            "day": r.created_at.day, "seq": r.created_at.seq,
            "upvotes": r.upvotes, "downvotes": r.downvotes
        }));
    }
    for ((voter, target), dir) in &store.votes {
        let (kind, id) = match target {
            VoteTarget::Post(p) => ("post", p.0),
            VoteTarget::Reply(r) => ("reply", r.0),
        };
        push(json!({
            "table": "votes", "voter_hash": voter.as_str(), "target_kind": kind,
            "target_id": id, "direction": direction_str(*dir)
        }));
    }
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, SnapshotError> {
    v.get(key)
        .ok_or_else(|| SnapshotError::Malformed(format!("missing field {key:?} in {v}")))
}

fn str_field(v: &Value, key: &str) -> Result<String, SnapshotError> {
    Ok(field(v, key)?
        .as_str()
        .ok_or_else(|| SnapshotError::Malformed(format!("field {key:?} is not a string")))?
        .to_string())
}

fn u64_field(v: &Value, key: &str) -> Result<u64, SnapshotError> {
    field(v, key)?
        .as_u64()
        .ok_or_else(|| SnapshotError::Malformed(format!("field {key:?} is not an integer")))
}

/// Import a store from the JSONL export format.
pub fn import_jsonl(text: &str) -> Result<Store, SnapshotError> {
    let mut store = Store::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let v: Value = serde_json::from_str(line)
            .map_err(|e| SnapshotError::Malformed(format!("bad JSONL line: {e}")))?;
        let table = str_field(&v, "table")?;
        match table.as_str() {
            "meta" => {
                let key = str_field(&v, "key")?;
                let value = str_field(&v, "value")?;
                match key.as_str() {
                    "format_version" => {
                        if value != FORMAT_VERSION {
                            return Err(SnapshotError::Malformed(format!(
                                "format version {value:?}"
                            )));
                        }
                    }
                    "seq" => {
                        store.seq = value
                            .parse()
                            .map_err(|_| SnapshotError::Malformed("seq".into()))?
                    }
                    "page_size" => {
                        store.page_size = value
                            .parse()
                            .map_err(|_| SnapshotError::Malformed("page_size".into()))?
                    }
                    _ => {
                        store.meta.insert(key, value);
                    }
                }
            }
            "subreddits" => {
                let id = SubredditId(u64_field(&v, "id")?);
                let slug = str_field(&v, "slug")?;
                store.slug_index.insert(slug.clone(), id);
                store.subreddits.insert(
                    id,
                    Subreddit { id, slug, description: str_field(&v, "description")? },
                );
            }
            "accounts" => {
                let hash = AuthorHash(str_field(&v, "author_hash")?);
                let subs: Vec<u64> = serde_json::from_value(field(&v, "subscribed")?.clone())
                    .map_err(|e| SnapshotError::Malformed(format!("subscribed: {e}")))?;
                store.accounts.insert(
                    hash.clone(),
                    AgentAccount {
                        author_hash: hash,
                        display_name: str_field(&v, "display_name")?,
                        persona_key: str_field(&v, "persona_key")?,
                        subscribed_subreddits: subs.into_iter().map(SubredditId).collect(),
                        memory: String::new(),
                    },
                );
            }
            "memories" => {
                let hash = AuthorHash(str_field(&v, "author_hash")?);
                let text = str_field(&v, "text")?;
                if let Some(acc) = store.accounts.get_mut(&hash) {
                    acc.memory = text;
                }
            }
            "posts" => {
                let id = PostId(u64_field(&v, "id")?);
                store.posts.insert(
                    id,
                    Post {
                        id,
                        subreddit_id: SubredditId(u64_field(&v, "subreddit_id")?),
                        author_hash: AuthorHash(str_field(&v, "author_hash")?),
                        title: str_field(&v, "title")?,
                        content: str_field(&v, "content")?,
                        created_at: Stamp {
                            day: u64_field(&v, "day")? as u32,
                            seq: u64_field(&v, "seq")?,
                        },
                        upvotes: u64_field(&v, "upvotes")? as u32,
                        downvotes: u64_field(&v, "downvotes")? as u32,
                        injected: field(&v, "injected")?.as_bool().unwrap_or(false),
                    },
                );
            }
            "replies" => {
                let id = ReplyId(u64_field(&v, "id")?);
                let parent = match field(&v, "parent_reply_id")? {
                    Value::Null => None,
                    x => Some(ReplyId(x.as_u64().ok_or_else(|| {
                        SnapshotError::Malformed("parent_reply_id".into())
                    })?)),
                };
                store.replies.insert(
                    id,
                    Reply {
                        id,
                        post_id: PostId(u64_field(&v, "post_id")?),
                        parent_reply_id: parent,
                        author_hash: AuthorHash(str_field(&v, "author_hash")?),
                        content: str_field(&v, "content")?,
                        created_at: Stamp {
                            day: u64_field(&v, "day")? as u32,
                            seq: u64_field(&v, "seq")?,
                        },
                        upvotes: u64_field(&v, "upvotes")? as u32,
                        downvotes: u64_field(&v, "downvotes")? as u32,
                    },
                );
            }
            "votes" => {
                store.votes.insert(
                    (
                        AuthorHash(str_field(&v, "voter_hash")?),
                        vote_target(&str_field(&v, "target_kind")?, u64_field(&v, "target_id")?)?,
                    ),
                    parse_direction(&str_field(&v, "direction")?)?,
                );
            }
            other => {
                return Err(SnapshotError::Malformed(format!("unknown table {other:?}")))
            }
        }
    }
    Ok(store)
}

/// Serialize a write log as JSONL, one record per write action.
pub fn write_log_jsonl(records: &[WriteRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).unwrap());
        out.push('\n');
    }
    out
}

pub fn parse_write_log_jsonl(text: &str) -> Result<Vec<WriteRecord>, SnapshotError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            serde_json::from_str(l)
                .map_err(|e| SnapshotError::Malformed(format!("bad write-log line: {e}")))
        })
        .collect()
}
