//! Batch evaluation: resolve each content item's author to a profile and
//! classify it, emitting a JSONL verdict table.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::judge::detect_with_judge;
use super::patterns::{compile_patterns_with, detect_with_patterns, PatternConfig, PatternSet};
use super::{DetectionVerdict, ItemMeta};
use crate::backend::{BackendError, ModelBackend};
use crate::persona::HumanProfile;
use crate::platform::{AuthorHash, Store};

/// One evaluable content item with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContentItem {
    pub content_ref: String,
    pub author_hash: AuthorHash,
    pub content: String,
    pub meta: ItemMeta,
}

/// Extract every post and reply from a store, in creation order. Post
/// items carry `title\ncontent` so leaks in titles are caught too.
pub fn collect_store_items(store: &Store) -> Vec<ContentItem> {
    let slug_of = |id| {
        store
            .subreddits()
            .find(|s| s.id == id)
            .map(|s| s.slug.clone())
    };
    let mut items: Vec<ContentItem> = store
        .posts()
        .map(|p| ContentItem {
            content_ref: format!("post:{}", p.id.0),
            author_hash: p.author_hash.clone(),
            content: format!("{}\n{}", p.title, p.content),
            meta: ItemMeta {
                kind: "post".into(),
                subreddit: slug_of(p.subreddit_id),
                post_id: Some(p.id.0),
                day: p.created_at.day,
                seq: p.created_at.seq,
                parent_seq: None,
            },
        })
        .collect();
    items.extend(store.replies().map(|r| {
        let subreddit = store.post(r.post_id).and_then(|p| slug_of(p.subreddit_id));
        ContentItem {
            content_ref: format!("reply:{}", r.id.0),
            author_hash: r.author_hash.clone(),
            content: r.content.clone(),
            meta: ItemMeta {
                kind: "reply".into(),
                subreddit,
                post_id: Some(r.post_id.0),
                day: r.created_at.day,
                seq: r.created_at.seq,
                parent_seq: r.parent_reply_id.map(|p| p.0),
            },
        }
    }));
    items.sort_by_key(|i| i.meta.seq);
    items
}

/// Which detection pipeline [`evaluate_corpus`] runs.
pub enum DetectorChoice<'a> {
    Pattern(PatternConfig),
    Judge(&'a dyn ModelBackend),
}

/// Classify every item whose author resolves to a profile. Items from
/// authors without profiles (e.g. injected fictitious accounts) have no
/// ground truth and are skipped. Output order follows input order.
pub fn evaluate_corpus(
    items: &[ContentItem],
    profiles: &BTreeMap<AuthorHash, HumanProfile>,
    choice: &DetectorChoice<'_>,
) -> Result<Vec<DetectionVerdict>, BackendError> {
    match choice {
        DetectorChoice::Pattern(cfg) => {
            let sets: BTreeMap<&AuthorHash, PatternSet> = profiles
                .iter()
                .map(|(a, p)| (a, compile_patterns_with(p, cfg)))
                .collect();
            Ok(items
                .par_iter()
                .filter_map(|item| {
                    let set = sets.get(&item.author_hash)?;
                    let mut v = detect_with_patterns(
                        &item.content_ref,
                        &item.content,
                        &item.author_hash,
                        set,
                    );
                    v.meta = item.meta.clone();
                    Some(v)
                })
                .collect())
        }
        DetectorChoice::Judge(backend) => {
            let mut out = Vec::new();
            for item in items {
                let Some(profile) = profiles.get(&item.author_hash) else { continue };
                let mut v = detect_with_judge(
                    &item.content_ref,
                    &item.content,
                    &item.author_hash,
                    profile,
                    *backend,
                )?;
                v.meta = item.meta.clone();
                out.push(v);
            }
            Ok(out)
        }
    }
}

/// Serialize verdicts as JSONL, one object per line, trailing newline.
pub fn verdicts_to_jsonl(verdicts: &[DetectionVerdict]) -> String {
    let mut out = String::new();
    for v in verdicts {
        out.push_str(&serde_json::to_string(v).expect("verdict serializes"));
        out.push('\n');
    }
    out
}

pub fn verdicts_from_jsonl(text: &str) -> Result<Vec<DetectionVerdict>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persona::{generate_profile_offline, generate_seed_identity};

    fn world() -> (Store, BTreeMap<AuthorHash, HumanProfile>) {
        let mut store = Store::new();
        let s = store.create_subreddit("general", "talk").unwrap();
        let mut profiles = BTreeMap::new();
        for i in 0..2u64 {
            let hash = AuthorHash::from(format!("pop-{i}").as_str());
            store.create_account(hash.clone(), &format!("A{i}"), "p").unwrap();
            profiles.insert(
                hash,
                generate_profile_offline(&format!("pop-{i}"), &generate_seed_identity(i), i),
            );
        }
        let a0 = AuthorHash::from("pop-0");
        let leak_value = profiles[&a0]
            .iter_attributes()
            .find(|(_, k, _)| *k == "employer")
            .map(|(_, _, v)| v.to_string())
            .unwrap();
        store
            .insert_post_raw(0, s, a0.clone(), "work stuff", &format!("I work at {leak_value}"), 0, false);
        store.insert_post_raw(1, s, AuthorHash::from("pop-1"), "clean", "nothing here", 0, false);
        // an author with no profile: skipped, not erred
        store.create_account(AuthorHash::from("adv-0"), "N", "p").unwrap();
        store.insert_post_raw(1, s, AuthorHash::from("adv-0"), "nudge", "my human says hi", 3, true);
        (store, profiles)
    }

    #[test]
    fn corpus_evaluation_resolves_authors_and_orders_output() {
        let (store, profiles) = world();
        let items = collect_store_items(&store);
        assert_eq!(items.len(), 3);
        let verdicts =
            evaluate_corpus(&items, &profiles, &DetectorChoice::Pattern(PatternConfig::default()))
                .unwrap();
        assert_eq!(verdicts.len(), 2); // profile-less author skipped
        assert!(verdicts[0].leaking());
        assert!(!verdicts[1].leaking());
        assert_eq!(verdicts[0].meta.kind, "post");
        assert_eq!(verdicts[0].meta.subreddit.as_deref(), Some("general"));
    }

    #[test]
    fn jsonl_round_trip_is_lossless() {
        let (store, profiles) = world();
        let items = collect_store_items(&store);
        let verdicts =
            evaluate_corpus(&items, &profiles, &DetectorChoice::Pattern(PatternConfig::default()))
                .unwrap();
        let text = verdicts_to_jsonl(&verdicts);
        assert_eq!(verdicts_from_jsonl(&text).unwrap(), verdicts);
        assert_eq!(verdicts_to_jsonl(&verdicts_from_jsonl(&text).unwrap()), text);
    }
}
