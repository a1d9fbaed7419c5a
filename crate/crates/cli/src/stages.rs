//! The six pipeline stages. Each is idempotent, reads its inputs from the
//! output directory of earlier stages, and appends a digest record to
//! `manifest.json`, so a rerun with the same seed and config reproduces
//! every artifact byte for byte.

use serde::de::DeserializeOwned;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use agora_core::adversary::{inject, NudgeLevel};
use agora_core::backend::scripted::ScriptedAgentBackend;
use agora_core::backend::ModelBackend;
use agora_core::detector::{
    collect_store_items, common_values, evaluate_corpus, verdicts_from_jsonl, verdicts_to_jsonl,
    DetectorChoice, PatternConfig,
};
use agora_core::persona::{
    generate_persona_offline, generate_profile_offline, generate_seed_identity, validate_profile,
    AgentPersona, HumanProfile, ValidationConfig,
};
use agora_core::platform::snapshot::{export_jsonl, load, save, write_log_jsonl};
use agora_core::platform::{AuthorHash, Store};
use agora_core::runtime::{run_simulation, RunTrace, SimAgent};
use agora_core::seed;
use agora_core::testbed::{
    enumerate_runs, run_matrix, EvalResult, MatrixConfig, RunResources, CHECKPOINTS,
};
use agora_core::analytics::{report, Adjacency};

use crate::config::CliConfig;
use crate::manifest::{digest_artifacts, digest_bytes, PipelineManifest, StageRecord};
use crate::CliError;

/// Artifact layout under the output directory.
pub struct Paths {
    out: PathBuf,
}

impl Paths {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Paths { out: out.into() }
    }

    pub fn out(&self) -> &Path {
        &self.out
    }

    pub fn profiles(&self) -> PathBuf {
        self.out.join("population/profiles.jsonl")
    }
    pub fn personas(&self) -> PathBuf {
        self.out.join("population/personas.jsonl")
    }
    pub fn eval_profiles(&self) -> PathBuf {
        self.out.join("population/eval_profiles.jsonl")
    }
    pub fn eval_personas(&self) -> PathBuf {
        self.out.join("population/eval_personas.jsonl")
    }
    pub fn subreddits(&self) -> PathBuf {
        self.out.join("population/subreddits.json")
    }
    pub fn snapshot(&self) -> PathBuf {
        self.out.join("sim/snapshot.db")
    }
    pub fn world(&self) -> PathBuf {
        self.out.join("sim/world.jsonl")
    }
    pub fn traces(&self) -> PathBuf {
        self.out.join("sim/traces.jsonl")
    }
    pub fn write_log(&self) -> PathBuf {
        self.out.join("sim/write_log.jsonl")
    }
    pub fn level_snapshot(&self, level: u8) -> PathBuf {
        self.out.join(format!("inject/snapshot-l{level}.db"))
    }
    pub fn level_record(&self, level: u8) -> PathBuf {
        self.out.join(format!("inject/injection-l{level}.json"))
    }
    pub fn results(&self) -> PathBuf {
        self.out.join("testbed/results.jsonl")
    }
    pub fn verdicts(&self) -> PathBuf {
        self.out.join("detect/verdicts.jsonl")
    }
    pub fn report_dir(&self) -> PathBuf {
        self.out.join("report")
    }
}

fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut text = String::new();
    for item in items {
        text.push_str(&serde_json::to_string(item)?);
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn read_jsonl<T: DeserializeOwned>(path: &Path, produced_by: &str) -> Result<Vec<T>, CliError> {
    if !path.exists() {
        return Err(CliError::missing_input(path, produced_by));
    }
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            serde_json::from_str(l)
                .map_err(|e| CliError::Config(format!("corrupt {}: {e}", path.display())))
        })
        .collect()
}

fn config_digest(config: &CliConfig) -> String {
    digest_bytes(serde_json::to_string(config).expect("config serializes").as_bytes())
}

fn record_stage(
    paths: &Paths,
    stage: &str,
    seed: u64,
    config: &CliConfig,
    inputs: &[PathBuf],
    outputs: &[PathBuf],
) -> Result<(), CliError> {
    let input_refs: Vec<&Path> = inputs.iter().map(|p| p.as_path()).collect();
    let output_refs: Vec<&Path> = outputs.iter().map(|p| p.as_path()).collect();
    let mut manifest = PipelineManifest::load(paths.out())?;
    manifest.record(StageRecord {
        stage: stage.to_string(),
        seed,
        config_digest: config_digest(config),
        inputs: digest_artifacts(paths.out(), &input_refs)?,
        outputs: digest_artifacts(paths.out(), &output_refs)?,
    });
    manifest.save(paths.out())
}

/// Generate the organic population and the held-out evaluation set.
/// Population profiles live in the "pop-" namespace, held-out profiles in
/// "eval-"; the two can never collide.
pub fn run_population(paths: &Paths, config: &CliConfig, seed: u64) -> Result<(), CliError> {
    let seed = seed::derive(seed, "population");
    let slugs: Vec<String> = config.subreddits.iter().map(|s| s.slug.clone()).collect();

    let mut profiles = Vec::with_capacity(config.population);
    let mut personas = Vec::with_capacity(config.population);
    for i in 0..config.population as u64 {
        let id = generate_seed_identity(seed::derive_idx(seed, "pop-identity", i));
        profiles.push(generate_profile_offline(
            &format!("pop-{i}"),
            &id,
            seed::derive_idx(seed, "pop-profile", i),
        ));
        personas.push(generate_persona_offline(seed::derive_idx(seed, "pop-persona", i), &slugs));
    }

    let mut eval_profiles = Vec::new();
    let mut eval_personas = Vec::new();
    for n in 1..=config.eval_personas as u64 {
        let id = generate_seed_identity(seed::derive_idx(seed, "eval-identity", n));
        eval_profiles.push(generate_profile_offline(
            &format!("eval-{n}"),
            &id,
            seed::derive_idx(seed, "eval-profile", n),
        ));
        eval_personas.push(generate_persona_offline(seed::derive_idx(seed, "eval-persona", n), &slugs));
    }

    let vcfg = ValidationConfig::default();
    let mut violations = Vec::new();
    for p in profiles.iter().chain(&eval_profiles) {
        for v in validate_profile(p, &vcfg) {
            violations.push(format!("{}: {v:?}", p.profile_id));
        }
    }
    if !violations.is_empty() {
        return Err(CliError::Validation(format!(
            "{} profile violations: {}",
            violations.len(),
            violations.join("; ")
        )));
    }

    write_jsonl(&paths.profiles(), &profiles)?;
    write_jsonl(&paths.personas(), &personas)?;
    write_jsonl(&paths.eval_profiles(), &eval_profiles)?;
    write_jsonl(&paths.eval_personas(), &eval_personas)?;
    std::fs::write(
        paths.subreddits(),
        serde_json::to_string_pretty(&config.subreddits)?,
    )?;

    record_stage(
        paths,
        "population",
        seed,
        config,
        &[],
        &[
            paths.profiles(),
            paths.personas(),
            paths.eval_profiles(),
            paths.eval_personas(),
            paths.subreddits(),
        ],
    )
}

/// Run the organic multi-agent simulation and write the base snapshot.
/// Every population agent gets its own scripted backend, so what it can
/// leak is exactly its own profile.
pub fn run_simulate(paths: &Paths, config: &CliConfig, seed: u64) -> Result<(), CliError> {
    let seed = seed::derive(seed, "simulate");
    let profiles: Vec<HumanProfile> = read_jsonl(&paths.profiles(), "population")?;
    let personas: Vec<AgentPersona> = read_jsonl(&paths.personas(), "population")?;
    if profiles.len() != personas.len() {
        return Err(CliError::Validation(format!(
            "population mismatch: {} profiles vs {} personas",
            profiles.len(),
            personas.len()
        )));
    }

    let mut store = Store::new();
    for spec in &config.subreddits {
        store
            .create_subreddit(&spec.slug, &spec.description)
            .map_err(|e| CliError::Validation(format!("subreddit {}: {e}", spec.slug)))?;
    }

    let mix = &config.policy_mix;
    let assignment = agora_core::runtime::assign_backends(
        profiles.len(),
        &mix.weights,
        seed::derive(seed, "policy-assign"),
    );

    let mut agents = Vec::with_capacity(profiles.len());
    let mut backends: Vec<Box<dyn ModelBackend>> = Vec::with_capacity(profiles.len());
    for (i, (profile, persona)) in profiles.iter().zip(&personas).enumerate() {
        let hash = AuthorHash::from(profile.profile_id.as_str());
        store
            .create_account(hash.clone(), &persona.name, &persona.name)
            .map_err(|e| CliError::Validation(format!("account {}: {e}", profile.profile_id)))?;
        for slug in &persona.preferred_subreddits {
            if let Some(sub) = store.subreddit_by_slug(slug) {
                let id = sub.id;
                store
                    .subscribe(&hash, id)
                    .map_err(|e| CliError::Validation(format!("subscribe: {e}")))?;
            }
        }
        let mut policy = mix.policies[assignment[i]].clone();
        policy.rng_seed = seed::derive_idx(seed, "agent-policy", i as u64);
        let home = if persona.preferred_subreddits.is_empty() {
            config.subreddits.iter().map(|s| s.slug.clone()).collect()
        } else {
            persona.preferred_subreddits.clone()
        };
        backends.push(Box::new(ScriptedAgentBackend::new(policy, profile.clone(), home)));
        agents.push(SimAgent {
            author_hash: hash,
            persona: persona.clone(),
            profile: profile.clone(),
            backend_index: i,
        });
    }

    let mut sim_config = config.simulation.clone();
    sim_config.rng_seed = seed::derive(seed, "schedule");
    let traces = run_simulation(&mut store, &agents, &backends, &sim_config);
    let flat: Vec<&RunTrace> = traces.iter().flatten().collect();

    std::fs::create_dir_all(paths.snapshot().parent().unwrap())?;
    save(&store, &paths.snapshot())
        .map_err(|e| CliError::Config(format!("snapshot save: {e}")))?;
    std::fs::write(paths.world(), export_jsonl(&store))?;
    write_jsonl(&paths.traces(), &flat)?;
    std::fs::write(paths.write_log(), write_log_jsonl(store.write_log()))?;

    record_stage(
        paths,
        "simulate",
        seed,
        config,
        &[paths.profiles(), paths.personas()],
        &[paths.snapshot(), paths.world(), paths.traces(), paths.write_log()],
    )
}

/// Contaminate the base snapshot at each configured nudge level. The base
/// snapshot is never modified; each level gets its own copy plus a
/// provenance sidecar naming the injected posts and fictitious authors.
pub fn run_inject(paths: &Paths, config: &CliConfig, seed: u64) -> Result<(), CliError> {
    let seed = seed::derive(seed, "inject");
    if !paths.snapshot().exists() {
        return Err(CliError::missing_input(&paths.snapshot(), "simulate"));
    }
    let base = load(&paths.snapshot())
        .map_err(|e| CliError::Config(format!("snapshot load: {e}")))?;
    let base_export = export_jsonl(&base);

    let mut outputs = Vec::new();
    for &level in &config.levels {
        let level = NudgeLevel::new(level)
            .map_err(|e| CliError::Config(format!("level: {e}")))?;
        let (contaminated, record) =
            inject(&base, level, seed::derive_idx(seed, "level", level.get() as u64))
                .map_err(|e| CliError::Validation(format!("inject l{}: {e}", level.get())))?;
        let db = paths.level_snapshot(level.get());
        std::fs::create_dir_all(db.parent().unwrap())?;
        save(&contaminated, &db).map_err(|e| CliError::Config(format!("snapshot save: {e}")))?;
        let sidecar = paths.level_record(level.get());
        std::fs::write(&sidecar, serde_json::to_string_pretty(&record)?)?;
        outputs.push(db);
        outputs.push(sidecar);
    }

    // injection must be pure with respect to the base world
    if export_jsonl(&base) != base_export {
        return Err(CliError::Validation("base snapshot mutated during injection".into()));
    }

    record_stage(paths, "inject", seed, config, &[paths.snapshot()], &outputs)
}

/// Per-(backend, persona) scripted backends plus the level snapshots,
/// resolved for [`run_matrix`].
struct PipelineResources {
    snapshots: BTreeMap<u8, Arc<Store>>,
    personas: BTreeMap<u8, AgentPersona>,
    profiles: BTreeMap<u8, HumanProfile>,
    backends: BTreeMap<(String, u8), ScriptedAgentBackend>,
}

impl RunResources for PipelineResources {
    fn persona(&self, index: u8) -> &AgentPersona {
        &self.personas[&index]
    }
    fn profile(&self, index: u8) -> &HumanProfile {
        &self.profiles[&index]
    }
    fn backend(&self, backend_id: &str, persona_index: u8) -> &dyn ModelBackend {
        &self.backends[&(backend_id.to_string(), persona_index)]
    }
    fn snapshot(&self, level: NudgeLevel) -> Arc<Store> {
        Arc::clone(&self.snapshots[&level.get()])
    }
}

/// Detector config shared by the testbed and detect stages: the blocklist
/// is mined from values too common across the population to identify
/// anyone.
fn pattern_config(config: &CliConfig, profiles: &[HumanProfile]) -> PatternConfig {
    PatternConfig {
        blocklist: common_values(profiles, config.common_value_fraction),
        ..PatternConfig::default()
    }
}

/// Run the evaluation matrix: one held-out agent at a time, alone in a
/// frozen contaminated snapshot.
pub fn run_testbed(paths: &Paths, config: &CliConfig, seed: u64) -> Result<(), CliError> {
    let seed = seed::derive(seed, "testbed");
    let eval_profiles: Vec<HumanProfile> = read_jsonl(&paths.eval_profiles(), "population")?;
    let eval_personas: Vec<AgentPersona> = read_jsonl(&paths.eval_personas(), "population")?;
    let pop_profiles: Vec<HumanProfile> = read_jsonl(&paths.profiles(), "population")?;

    let mut snapshots = BTreeMap::new();
    for &level in &config.levels {
        let path = paths.level_snapshot(level);
        if !path.exists() {
            return Err(CliError::missing_input(&path, "inject"));
        }
        let store =
            load(&path).map_err(|e| CliError::Config(format!("snapshot load: {e}")))?;
        snapshots.insert(level, Arc::new(store));
    }

    let backend_id = format!("scripted:{}", config.testbed_policy.policy_id);
    let matrix = MatrixConfig {
        backend_ids: vec![backend_id.clone()],
        persona_indices: config.matrix_personas(),
        levels: config.levels.clone(),
        redact: vec![false, true],
        seeded_subs: vec![false, true],
        checkpoints: CHECKPOINTS.to_vec(),
    };
    let configs = enumerate_runs(&matrix)
        .map_err(|e| CliError::Config(format!("matrix: {e}")))?;

    let slugs: Vec<String> = config.subreddits.iter().map(|s| s.slug.clone()).collect();
    let mut personas = BTreeMap::new();
    let mut profiles = BTreeMap::new();
    let mut backends = BTreeMap::new();
    for &n in &matrix.persona_indices {
        let profile = eval_profiles
            .get(n as usize - 1)
            .ok_or_else(|| CliError::Validation(format!("no held-out profile for index {n}")))?;
        let persona = eval_personas
            .get(n as usize - 1)
            .ok_or_else(|| CliError::Validation(format!("no held-out persona for index {n}")))?;
        profiles.insert(n, profile.clone());
        personas.insert(n, persona.clone());
        let mut policy = config.testbed_policy.clone();
        policy.rng_seed = seed::derive_idx(seed, "eval-policy", n as u64);
        backends.insert(
            (backend_id.clone(), n),
            ScriptedAgentBackend::new(policy, profile.clone(), slugs.clone()),
        );
    }
    let resources = PipelineResources { snapshots, personas, profiles, backends };

    let pattern = pattern_config(config, &pop_profiles);
    let results = run_matrix(&configs, &resources, &pattern, config.checkpoint_mode);
    write_jsonl(&paths.results(), &results)?;

    let mut inputs = vec![paths.eval_profiles(), paths.eval_personas(), paths.profiles()];
    inputs.extend(config.levels.iter().map(|&l| paths.level_snapshot(l)));
    record_stage(paths, "testbed", seed, config, &inputs, &[paths.results()])
}

/// Classify every organic post and reply in the base snapshot against its
/// author's ground-truth profile.
pub fn run_detect(paths: &Paths, config: &CliConfig, seed: u64) -> Result<(), CliError> {
    let seed = seed::derive(seed, "detect");
    if !paths.snapshot().exists() {
        return Err(CliError::missing_input(&paths.snapshot(), "simulate"));
    }
    let store = load(&paths.snapshot())
        .map_err(|e| CliError::Config(format!("snapshot load: {e}")))?;
    let pop_profiles: Vec<HumanProfile> = read_jsonl(&paths.profiles(), "population")?;
    let by_author: BTreeMap<AuthorHash, HumanProfile> = pop_profiles
        .iter()
        .map(|p| (AuthorHash::from(p.profile_id.as_str()), p.clone()))
        .collect();

    let items = collect_store_items(&store);
    let choice = DetectorChoice::Pattern(pattern_config(config, &pop_profiles));
    let verdicts = evaluate_corpus(&items, &by_author, &choice)
        .map_err(|e| CliError::Backend(format!("detector: {e}")))?;

    std::fs::create_dir_all(paths.verdicts().parent().unwrap())?;
    std::fs::write(paths.verdicts(), verdicts_to_jsonl(&verdicts))?;
    record_stage(
        paths,
        "detect",
        seed,
        config,
        &[paths.snapshot(), paths.profiles()],
        &[paths.verdicts()],
    )
}

/// Aggregate verdicts and testbed results into the report bundle.
pub fn run_analyze(paths: &Paths, config: &CliConfig, seed: u64) -> Result<(), CliError> {
    let seed = seed::derive(seed, "analyze");
    if !paths.verdicts().exists() {
        return Err(CliError::missing_input(&paths.verdicts(), "detect"));
    }
    let verdicts = verdicts_from_jsonl(&std::fs::read_to_string(paths.verdicts())?)
        .map_err(|e| CliError::Config(format!("corrupt verdicts: {e}")))?;
    let results: Vec<EvalResult> = read_jsonl(&paths.results(), "testbed")?;

    let bundle = report(&verdicts, &results, config.simulation.days, Adjacency::CreationOrder);
    let dir = paths.report_dir();
    std::fs::create_dir_all(&dir)?;
    let mut outputs = Vec::new();
    for (name, contents) in &bundle.files {
        let path = dir.join(name);
        std::fs::write(&path, contents)?;
        outputs.push(path);
    }

    record_stage(
        paths,
        "analyze",
        seed,
        config,
        &[paths.verdicts(), paths.results()],
        &outputs,
    )
}

/// Run every stage in order with one root seed.
pub fn run_all(paths: &Paths, config: &CliConfig, seed: u64) -> Result<(), CliError> {
    run_population(paths, config, seed)?;
    run_simulate(paths, config, seed)?;
    run_inject(paths, config, seed)?;
    run_testbed(paths, config, seed)?;
    run_detect(paths, config, seed)?;
    run_analyze(paths, config, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> CliConfig {
        let mut config = CliConfig::default();
        config.population = 6;
        config.eval_personas = 2;
        config.simulation.days = 2;
        config.simulation.budget = 4;
        config.levels = vec![1, 3];
        config
    }

    #[test]
    fn population_writes_disjoint_namespaces() {
        let dir = tempfile::tempdir().unwrap();
        let paths = Paths::new(dir.path());
        run_population(&paths, &tiny_config(), 11).unwrap();
        let pop: Vec<HumanProfile> = read_jsonl(&paths.profiles(), "population").unwrap();
        let eval: Vec<HumanProfile> = read_jsonl(&paths.eval_profiles(), "population").unwrap();
        assert_eq!(pop.len(), 6);
        assert_eq!(eval.len(), 2);
        assert!(pop.iter().all(|p| p.profile_id.starts_with("pop-")));
        assert!(eval.iter().all(|p| p.profile_id.starts_with("eval-")));
    }

    #[test]
    fn stages_require_their_inputs() {
        let dir = tempfile::tempdir().unwrap();
        let paths = Paths::new(dir.path());
        let config = tiny_config();
        let err = run_simulate(&paths, &config, 1).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = run_inject(&paths, &config, 1).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn full_pipeline_produces_all_artifacts_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let paths = Paths::new(dir.path());
        let config = tiny_config();
        run_all(&paths, &config, 29).unwrap();
        for path in [
            paths.profiles(),
            paths.snapshot(),
            paths.level_snapshot(1),
            paths.level_snapshot(3),
            paths.results(),
            paths.verdicts(),
            paths.report_dir().join("summary.md"),
        ] {
            assert!(path.exists(), "{} missing", path.display());
        }
        let manifest = PipelineManifest::load(dir.path()).unwrap();
        for stage in ["population", "simulate", "inject", "testbed", "detect", "analyze"] {
            assert!(manifest.stage(stage).is_some(), "stage {stage} not recorded");
        }
    }
}
