//! Integration test: the whole library flow in one pass — population,
//! simulation, contamination, a testbed run, detection, and reporting —
//! checked for internal consistency and determinism.

use std::collections::BTreeMap;
use std::sync::Arc;

use agora_core::adversary::{inject, NudgeLevel};
use agora_core::analytics::{report, Adjacency};
use agora_core::backend::scripted::{ScriptedAgentBackend, ScriptedPolicy};
use agora_core::backend::ModelBackend;
use agora_core::detector::{collect_store_items, evaluate_corpus, DetectorChoice, PatternConfig};
use agora_core::persona::{
    generate_persona_offline, generate_profile_offline, generate_seed_identity, HumanProfile,
};
use agora_core::platform::snapshot::export_jsonl;
use agora_core::platform::{AuthorHash, Store};
use agora_core::runtime::{run_simulation, RetryPolicy, SimAgent, SimulationConfig};
use agora_core::testbed::{run_eval, EvalContext, TestbedConfig};

const SLUGS: [(&str, &str); 3] = [
    ("general", "anything goes"),
    ("daily-logs", "what happened today"),
    ("human-relations", "stories about partners, family, and humans"),
];

fn build_world(n_agents: usize) -> (Store, Vec<SimAgent>, Vec<Box<dyn ModelBackend>>) {
    let mut store = Store::new();
    for (slug, desc) in SLUGS {
        store.create_subreddit(slug, desc).unwrap();
    }
    let slugs: Vec<String> = SLUGS.iter().map(|(s, _)| s.to_string()).collect();
    let mut agents = Vec::new();
    let mut backends: Vec<Box<dyn ModelBackend>> = Vec::new();
    for i in 0..n_agents as u64 {
        let profile =
            generate_profile_offline(&format!("pop-{i}"), &generate_seed_identity(i), i);
        let persona = generate_persona_offline(i, &slugs);
        let hash = AuthorHash::from(profile.profile_id.as_str());
        store.create_account(hash.clone(), &persona.name, &persona.name).unwrap();
        let policy = ScriptedPolicy {
            policy_id: format!("sim-{i}"),
            p_base: 0.08,
            p_exposed: 0.5,
            rng_seed: i,
            ..ScriptedPolicy::default()
        };
        backends.push(Box::new(ScriptedAgentBackend::new(
            policy,
            profile.clone(),
            slugs.clone(),
        )));
        agents.push(SimAgent {
            author_hash: hash,
            persona,
            profile,
            backend_index: i as usize,
        });
    }
    (store, agents, backends)
}

#[test]
fn simulate_contaminate_evaluate_detect_report() {
    let (mut store, agents, backends) = build_world(8);
    let sim = SimulationConfig {
        days: 3,
        activation_fraction: 0.5,
        budget: 6,
        rng_seed: 3,
        retry: None,
    };
    let traces = run_simulation(&mut store, &agents, &backends, &sim);
    assert_eq!(traces.len(), 3);
    assert!(store.post_count() + store.reply_count() > 0, "nothing was written");

    // contaminate at level 4 and freeze
    let (contaminated, record) = inject(&store, NudgeLevel::new(4).unwrap(), 9).unwrap();
    assert_eq!(record.injected_post_ids.len(), NudgeLevel::new(4).unwrap().target_count(3));
    let snapshot = Arc::new(contaminated);
    let frozen = export_jsonl(&snapshot);

    // one held-out agent, alone in the frozen snapshot
    let profile: HumanProfile =
        generate_profile_offline("eval-1", &generate_seed_identity(100), 100);
    let persona = generate_persona_offline(
        100,
        &SLUGS.iter().map(|(s, _)| s.to_string()).collect::<Vec<_>>(),
    );
    let backend = ScriptedAgentBackend::new(
        ScriptedPolicy { policy_id: "eval".into(), p_base: 0.1, p_exposed: 0.6, rng_seed: 5, ..ScriptedPolicy::default() },
        profile.clone(),
        SLUGS.iter().map(|(s, _)| s.to_string()).collect(),
    );
    let config = TestbedConfig {
        backend_id: "scripted:eval".into(),
        persona_index: 1,
        level: NudgeLevel::new(4).unwrap(),
        redact: false,
        seeded_subs: true,
        budget_checkpoint: 30,
    };
    let pattern_config = PatternConfig::default();
    let ctx = EvalContext {
        snapshot: Arc::clone(&snapshot),
        persona: &persona,
        profile: &profile,
        backend: &backend,
        pattern_config: &pattern_config,
        retry: RetryPolicy::instant(),
        summary_checkpoints: vec![10, 20, 30],
    };
    let result = run_eval(&config, &ctx);
    assert!(!result.incomplete);
    assert_eq!(result.verdicts.len(), result.trace.writes.len());
    assert_eq!(export_jsonl(&snapshot), frozen, "testbed run mutated the frozen snapshot");

    // detect over the organic world with ground-truth profiles
    let profiles: BTreeMap<AuthorHash, HumanProfile> = agents
        .iter()
        .map(|a| (a.author_hash.clone(), a.profile.clone()))
        .collect();
    let items = collect_store_items(&store);
    let verdicts = evaluate_corpus(
        &items,
        &profiles,
        &DetectorChoice::Pattern(PatternConfig::default()),
    )
    .unwrap();
    assert_eq!(verdicts.len(), items.len(), "every organic item gets a verdict");

    // report bundle is complete and deterministic
    let results = vec![result];
    let bundle = report(&verdicts, &results, sim.days, Adjacency::CreationOrder);
    for file in [
        "cumulative_leaks.csv",
        "rate_by_subreddit.csv",
        "count_by_domain.csv",
        "rate_by_persona.csv",
        "redact_comparison.csv",
        "summary.md",
    ] {
        assert!(bundle.files.contains_key(file), "missing {file}");
    }
    let again = report(&verdicts, &results, sim.days, Adjacency::CreationOrder);
    assert_eq!(again, bundle);
}

#[test]
fn rerunning_the_simulation_reproduces_the_world() {
    let run = || {
        let (mut store, agents, backends) = build_world(6);
        let sim = SimulationConfig {
            days: 2,
            activation_fraction: 0.5,
            budget: 5,
            rng_seed: 17,
            retry: None,
        };
        run_simulation(&mut store, &agents, &backends, &sim);
        export_jsonl(&store)
    };
    assert_eq!(run(), run());
}
