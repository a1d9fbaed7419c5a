//! Property tests for cross-module invariants: snapshot round-trips,
//! budget safety of the agent loop, and monotonicity of the pattern
//! detector.

use proptest::prelude::*;

use agora_core::backend::scripted::{ScriptedAgentBackend, ScriptedPolicy};
use agora_core::detector::normalize::{digit_stream, normalize};
use agora_core::detector::{compile_patterns, detect_with_patterns};
use agora_core::persona::{generate_profile_offline, generate_seed_identity};
use agora_core::platform::snapshot::{export_jsonl, import_jsonl};
use agora_core::platform::{AuthorHash, Store};
use agora_core::runtime::{run_agent_turn, RetryPolicy, TurnBudget};

fn content() -> impl Strategy<Value = String> {
    // includes newlines, quotes, and non-ASCII to stress serialization
    proptest::string::string_regex("[ -~\u{e9}\u{4e16}\n\"\\\\]{0,40}").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snapshot_jsonl_round_trips_byte_for_byte(
        titles in proptest::collection::vec(content(), 1..8),
        replies in proptest::collection::vec(content(), 0..8),
        day in 0u32..50,
        upvotes in 0u32..100,
    ) {
        let mut store = Store::new();
        let sub = store.create_subreddit("general", "anything goes").unwrap();
        let author = AuthorHash::from("pop-0");
        store.create_account(author.clone(), "Agent", "persona").unwrap();
        let mut first_post = None;
        for t in &titles {
            let id = store.insert_post_raw(day, sub, author.clone(), t, t, upvotes, false);
            first_post.get_or_insert(id);
        }
        for r in &replies {
            if r.trim().is_empty() {
                continue;
            }
            store.commit_reply(&author, day, first_post.unwrap(), None, r).unwrap();
        }
        let exported = export_jsonl(&store);
        let back = import_jsonl(&exported).unwrap();
        prop_assert_eq!(export_jsonl(&back), exported);
    }

    #[test]
    fn agent_loop_never_exceeds_budget(
        budget in 1u32..25,
        p_base in 0.0f64..1.0,
        w_yield in 0.0f64..0.4,
        rng_seed in any::<u64>(),
    ) {
        let mut store = Store::new();
        store.create_subreddit("general", "anything goes").unwrap();
        let agent = AuthorHash::from("pop-0");
        store.create_account(agent.clone(), "Agent", "persona").unwrap();
        let profile = generate_profile_offline("pop-0", &generate_seed_identity(1), 1);
        let policy = ScriptedPolicy {
            policy_id: "prop".into(),
            p_base,
            p_exposed: p_base,
            w_yield,
            rng_seed,
            ..ScriptedPolicy::default()
        };
        let backend = ScriptedAgentBackend::new(policy, profile, vec!["general".into()]);
        let trace = run_agent_turn(
            &mut store,
            &agent,
            "system prompt",
            &backend,
            TurnBudget::new(budget),
            0,
            &RetryPolicy::instant(),
        );
        prop_assert!(trace.tool_calls.len() <= budget as usize);
        prop_assert!(trace.writes.len() <= trace.tool_calls.len());
        prop_assert!(trace.writes.iter().all(|w| (w.call_index as u32) < budget));
    }

    #[test]
    fn detector_flags_are_monotone_under_append(
        prefix in content(),
        suffix in content(),
        profile_seed in 0u64..50,
    ) {
        let profile = generate_profile_offline(
            "eval-1",
            &generate_seed_identity(profile_seed),
            profile_seed,
        );
        let set = compile_patterns(&profile);
        let author = AuthorHash::from("eval-1");
        let before = detect_with_patterns("item", &prefix, &author, &set);
        let combined = format!("{prefix} {suffix}");
        let after = detect_with_patterns("item", &combined, &author, &set);
        for (domain, flagged) in &before.domains {
            if *flagged {
                prop_assert!(after.domains[domain], "append cleared {domain} flag");
            }
        }
    }

    #[test]
    fn normalize_is_idempotent_and_clean(text in content()) {
        let once = normalize(&text);
        prop_assert_eq!(normalize(&once), once.clone());
        prop_assert!(once.split(' ').all(|t| !t.is_empty()) || once.is_empty());
        prop_assert!(digit_stream(&text).chars().all(|c| c.is_ascii_digit()));
    }
}
