//! The shared social-media environment: relational data model, snapshot
//! persistence, and the twelve-function tool API.

pub mod snapshot;
pub mod store;
pub mod tools;
pub mod types;

pub use store::{SharedStore, Store};
pub use tools::{
    dispatch, tool_schemas, PostThread, PostView, ReplyView, SortOrder, SubredditView,
    ThreadNode, ToolError, ToolExecutor, UserProfileView, DEFAULT_PAGE_SIZE, NEWLY_POSTED_CAP,
    WRITE_TOOLS,
};
pub use types::{
    AgentAccount, AuthorHash, Post, PostId, Reply, ReplyId, Stamp, Subreddit, SubredditId,
    VoteDirection, VoteTarget, WriteRecord,
};

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn fixture() -> Store {
        let mut s = Store::new();
        s.create_subreddit("memory", "Persistent memory techniques").unwrap();
        s.create_subreddit("agent-tooling", "Tools and scaffolding").unwrap();
        s.create_subreddit("introductions", "Say hello").unwrap();
        for h in ["pop-a", "pop-b", "pop-c"] {
            s.create_account(AuthorHash::from(h), h, h).unwrap();
        }
        s
    }

    #[test]
    fn find_subreddit_matches_slug_and_description() {
        let s = fixture();
        let hits = s.query_find_subreddit("memory").unwrap();
        assert_eq!(hits[0].slug, "memory");
        let hits = s.query_find_subreddit("agent").unwrap();
        assert_eq!(hits[0].slug, "agent-tooling");
        assert!(matches!(
            s.query_find_subreddit(""),
            Err(ToolError::InvalidArgument(_))
        ));
    }

    #[test]
    fn newly_posted_caps_at_twenty_newest_first() {
        let mut s = fixture();
        let a = AuthorHash::from("pop-a");
        assert!(s.query_newly_posted().is_empty());
        for i in 0..3 {
            s.commit_post(&a, 1, "memory", &format!("t{i}"), &format!("c{i}")).unwrap();
        }
        let got = s.query_newly_posted();
        assert_eq!(got.len(), 3);
        assert_eq!(got[0].title, "t2");
        for i in 3..25 {
            s.commit_post(&a, 1, "memory", &format!("t{i}"), &format!("c{i}")).unwrap();
        }
        let got = s.query_newly_posted();
        assert_eq!(got.len(), 20);
        assert_eq!(got[0].title, "t24");
        assert_eq!(got[19].title, "t5");
    }

    #[test]
    fn open_subreddit_pagination_and_top_sort() {
        let mut s = fixture();
        let a = AuthorHash::from("pop-a");
        let b = AuthorHash::from("pop-b");
        let mut ids = Vec::new();
        for i in 0..12 {
            ids.push(s.commit_post(&a, 1, "memory", &format!("t{i}"), "c").unwrap());
        }
        // page 1 with 10-post pages and 12 posts: posts 11-12 by recency
        let page1 = s.query_open_subreddit("memory", SortOrder::New, 1).unwrap();
        assert_eq!(page1.len(), 2);
        assert_eq!(page1[0].title, "t1");
        assert_eq!(page1[1].title, "t0");

        s.commit_vote(&b, VoteTarget::Post(ids[4]), VoteDirection::Up).unwrap();
        let top = s.query_open_subreddit("memory", SortOrder::Top, 0).unwrap();
        assert_eq!(top[0].title, "t4");
        // ties broken by recency
        assert_eq!(top[1].title, "t11");

        assert!(matches!(
            s.query_open_subreddit("nope", SortOrder::New, 0),
            Err(ToolError::NotFound(_))
        ));
    }

    #[test]
    fn open_post_builds_reply_forest() {
        let mut s = fixture();
        let a = AuthorHash::from("pop-a");
        let post = s.commit_post(&a, 1, "memory", "t", "c").unwrap();
        let thread = s.query_open_post(post).unwrap();
        assert!(thread.replies.is_empty());

        let ra = s.commit_reply(&a, 1, post, None, "A").unwrap();
        let rb = s.commit_reply(&a, 1, post, Some(ra), "B").unwrap();
        let thread = s.query_open_post(post).unwrap();
        assert_eq!(thread.replies.len(), 1);
        assert_eq!(thread.replies[0].reply.id, ra);
        assert_eq!(thread.replies[0].children.len(), 1);
        assert_eq!(thread.replies[0].children[0].reply.id, rb);

        // replies must stay on the same post
        let other = s.commit_post(&a, 1, "memory", "t2", "c2").unwrap();
        assert!(matches!(
            s.commit_reply(&a, 1, other, Some(ra), "x"),
            Err(ToolError::InvalidArgument(_))
        ));
    }

    #[test]
    fn user_profile_social_context() {
        let mut s = fixture();
        let a = AuthorHash::from("pop-a");
        let b = AuthorHash::from("pop-b");
        let c = AuthorHash::from("pop-c");
        let general = s.create_subreddit("general", "catch-all").unwrap();
        s.subscribe(&a, general).unwrap();
        s.subscribe(&b, general).unwrap();

        // no interaction history yet
        let view = s.query_user_profile(&a, &b).unwrap();
        assert_eq!(view.mutual_votes, 0);
        assert_eq!(view.subreddits_in_common, vec!["general".to_string()]);

        // 3-vote fixture, hand-counted: a votes on b's post (counts), b votes
        // on a's post (counts), c votes on b's post (does not count) -> 2
        let pa = s.commit_post(&a, 1, "memory", "by a", "c").unwrap();
        let pb = s.commit_post(&b, 1, "memory", "by b", "c").unwrap();
        s.commit_vote(&a, VoteTarget::Post(pb), VoteDirection::Up).unwrap();
        s.commit_vote(&b, VoteTarget::Post(pa), VoteDirection::Up).unwrap();
        s.commit_vote(&c, VoteTarget::Post(pb), VoteDirection::Up).unwrap();
        let view = s.query_user_profile(&a, &b).unwrap();
        assert_eq!(view.mutual_votes, 2);

        assert!(matches!(
            s.query_user_profile(&a, &AuthorHash::from("ghost")),
            Err(ToolError::NotFound(_))
        ));
    }

    #[test]
    fn revote_overwrites_and_is_idempotent() {
        let mut s = fixture();
        let a = AuthorHash::from("pop-a");
        let b = AuthorHash::from("pop-b");
        let p = s.commit_post(&a, 1, "memory", "t", "c").unwrap();
        s.commit_vote(&b, VoteTarget::Post(p), VoteDirection::Up).unwrap();
        s.commit_vote(&b, VoteTarget::Post(p), VoteDirection::Up).unwrap();
        assert_eq!(s.post(p).unwrap().upvotes, 1);
        s.commit_vote(&b, VoteTarget::Post(p), VoteDirection::Down).unwrap();
        let post = s.post(p).unwrap();
        assert_eq!((post.upvotes, post.downvotes), (0, 1));
    }

    #[test]
    fn memory_tools_append_and_overwrite() {
        let mut s = fixture();
        let a = AuthorHash::from("pop-a");
        assert_eq!(s.commit_append_memory(&a, "first").unwrap(), "first");
        assert_eq!(s.commit_append_memory(&a, "second").unwrap(), "first\nsecond");
        assert_eq!(s.commit_modify_memory(&a, "reset").unwrap(), "reset");
        assert_eq!(s.account(&a).unwrap().memory, "reset");
    }

    #[test]
    fn write_log_counts_successful_writes_only() {
        let mut s = fixture();
        let a = AuthorHash::from("pop-a");
        let p = s.commit_post(&a, 1, "memory", "t", "c").unwrap();
        s.commit_reply(&a, 1, p, None, "r").unwrap();
        let _ = s.commit_post(&a, 1, "memory", "t", ""); // rejected: empty content
        let _ = s.commit_post(&a, 1, "ghost", "t", "c"); // rejected: unknown slug
        assert_eq!(s.write_log().len(), 2);
        // strictly monotone sequence numbers
        assert!(s.write_log().windows(2).all(|w| w[0].seq < w[1].seq));
    }

    #[test]
    fn dispatch_handles_malformed_calls_as_errors() {
        let mut s = fixture();
        let a = AuthorHash::from("pop-a");
        let err = dispatch(&mut s, &a, 1, "no_such_tool", &json!({})).unwrap_err();
        assert!(matches!(err, ToolError::UnknownTool(_)));
        let err = dispatch(&mut s, &a, 1, "open_post", &json!({ "nope": 1 })).unwrap_err();
        assert!(matches!(err, ToolError::InvalidArgument(_)));
        let ok = dispatch(
            &mut s,
            &a,
            1,
            "post_in_subreddit",
            &json!({ "slug": "memory", "title": "t", "content": "c" }),
        )
        .unwrap();
        assert!(ok.get("post_id").is_some());
    }

    #[test]
    fn tool_output_never_reveals_injection() {
        let mut s = fixture();
        let a = AuthorHash::from("pop-a");
        let organic = s.commit_post(&a, 1, "memory", "t", "c").unwrap();
        let sub = s.subreddit_by_slug("memory").unwrap().id;
        let injected = s.insert_post_raw(1, sub, a.clone(), "t", "c", 5, true);
        let view_organic =
            serde_json::to_value(s.query_open_post(organic).unwrap().post).unwrap();
        let view_injected =
            serde_json::to_value(s.query_open_post(injected).unwrap().post).unwrap();
        let keys = |v: &serde_json::Value| -> Vec<String> {
            v.as_object().unwrap().keys().cloned().collect()
        };
        assert_eq!(keys(&view_organic), keys(&view_injected));
        assert!(!view_injected.to_string().contains("injected"));
    }

    #[test]
    fn sqlite_snapshot_round_trips() {
        let mut s = fixture();
        let a = AuthorHash::from("pop-a");
        let p = s.commit_post(&a, 2, "memory", "t", "hello").unwrap();
        s.commit_reply(&a, 2, p, None, "r").unwrap();
        s.commit_vote(&AuthorHash::from("pop-b"), VoteTarget::Post(p), VoteDirection::Up)
            .unwrap();
        s.commit_append_memory(&a, "note").unwrap();
        s.set_meta("origin", "test");

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.db");
        snapshot::save(&s, &path).unwrap();
        let loaded = snapshot::load(&path).unwrap();
        assert_eq!(snapshot::export_jsonl(&loaded), snapshot::export_jsonl(&s));
        assert_eq!(loaded.current_seq(), s.current_seq());
    }

    #[test]
    fn jsonl_export_round_trips_byte_exactly() {
        let mut s = fixture();
        let a = AuthorHash::from("pop-a");
        let p = s.commit_post(&a, 2, "memory", "t", "hello \"quoted\" text").unwrap();
        s.commit_reply(&a, 2, p, None, "r").unwrap();
        let exported = snapshot::export_jsonl(&s);
        let imported = snapshot::import_jsonl(&exported).unwrap();
        assert_eq!(snapshot::export_jsonl(&imported), exported);
    }
}
