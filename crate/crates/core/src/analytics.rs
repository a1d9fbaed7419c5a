//! Corpus statistics over verdict tables and evaluation results:
//! cumulative leakage curves, contagion conditionals, grouped rate tables,
//! redaction comparisons, and a CSV report bundle.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::detector::DetectionVerdict;
use crate::persona::PrivacyDomain;
use crate::seed;
use crate::testbed::EvalResult;

/// How "the previous reply in the thread" is defined for contagion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Adjacency {
    /// Previously created reply on the same post (default).
    CreationOrder,
    /// The reply's direct parent in the reply tree.
    ParentChain,
}

/// Leaking/total counter with an exact rate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counter {
    pub leaking: u64,
    pub total: u64,
}

impl Counter {
    fn add(&mut self, leaking: bool) {
        self.total += 1;
        if leaking {
            self.leaking += 1;
        }
    }

    /// None when the denominator is empty — undefined, never 0.
    pub fn rate(&self) -> Option<f64> {
        (self.total > 0).then(|| self.leaking as f64 / self.total as f64)
    }
}

/// Contagion conditionals with their raw numerators/denominators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContagionStats {
    pub adjacency: Adjacency,
    /// Replies with a qualifying predecessor.
    pub pairs: u64,
    pub after_leak: Counter,
    pub after_clean: Counter,
    /// Unconditional reply leak rate.
    pub baseline: Counter,
}

impl ContagionStats {
    pub fn p_after_leak(&self) -> Option<f64> {
        self.after_leak.rate()
    }

    pub fn p_after_clean(&self) -> Option<f64> {
        self.after_clean.rate()
    }

    pub fn p_baseline(&self) -> Option<f64> {
        self.baseline.rate()
    }

    /// p_after_leak / p_after_clean.
    pub fn ratio_leak_over_clean(&self) -> Option<f64> {
        match (self.p_after_leak(), self.p_after_clean()) {
            (Some(l), Some(c)) if c > 0.0 => Some(l / c),
            _ => None,
        }
    }

    /// p_after_leak / p_baseline.
    pub fn ratio_leak_over_baseline(&self) -> Option<f64> {
        match (self.p_after_leak(), self.p_baseline()) {
            (Some(l), Some(b)) if b > 0.0 => Some(l / b),
            _ => None,
        }
    }
}

fn reply_verdicts(verdicts: &[DetectionVerdict]) -> Vec<&DetectionVerdict> {
    let mut replies: Vec<&DetectionVerdict> = verdicts
        .iter()
        .filter(|v| v.meta.kind == "reply" && !v.undetermined)
        .collect();
    replies.sort_by_key(|v| v.meta.seq);
    replies
}

/// Condition each reply's leak flag on its predecessor's, per the chosen
/// adjacency. Replies without a qualifying predecessor only contribute to
/// the baseline.
pub fn contagion_stats(verdicts: &[DetectionVerdict], adjacency: Adjacency) -> ContagionStats {
    let replies = reply_verdicts(verdicts);
    let mut stats = ContagionStats {
        adjacency,
        pairs: 0,
        after_leak: Counter::default(),
        after_clean: Counter::default(),
        baseline: Counter::default(),
    };
    let leak_by_seq: BTreeMap<u64, bool> =
        replies.iter().map(|v| (v.meta.seq, v.leaking())).collect();
    let mut prev_on_post: BTreeMap<u64, bool> = BTreeMap::new();
    for v in &replies {
        stats.baseline.add(v.leaking());
        let predecessor = match adjacency {
            Adjacency::CreationOrder => {
                v.meta.post_id.and_then(|post| prev_on_post.get(&post).copied())
            }
            Adjacency::ParentChain => {
                v.meta.parent_seq.and_then(|p| leak_by_seq.get(&p).copied())
            }
        };
        if let Some(prev_leaked) = predecessor {
            stats.pairs += 1;
            if prev_leaked {
                stats.after_leak.add(v.leaking());
            } else {
                stats.after_clean.add(v.leaking());
            }
        }
        if let Some(post) = v.meta.post_id {
            prev_on_post.insert(post, v.leaking());
        }
    }
    stats
}

/// Per-day cumulative count of leaking items over `days` days.
/// Monotone nondecreasing by construction.
pub fn cumulative_leak_curve(verdicts: &[DetectionVerdict], days: u32) -> Vec<u64> {
    let mut per_day = vec![0u64; days as usize];
    for v in verdicts {
        if v.leaking() && (v.meta.day as usize) < per_day.len() {
            per_day[v.meta.day as usize] += 1;
        }
    }
    let mut total = 0;
    per_day
        .into_iter()
        .map(|d| {
            total += d;
            total
        })
        .collect()
}

/// One row of a grouped rate table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateRow {
    pub key: String,
    pub leaking: u64,
    pub total: u64,
}

impl RateRow {
    pub fn rate(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.leaking as f64 / self.total as f64
        }
    }
}

fn rate_table(entries: impl Iterator<Item = (String, bool)>) -> Vec<RateRow> {
    let mut groups: BTreeMap<String, Counter> = BTreeMap::new();
    for (key, leaking) in entries {
        groups.entry(key).or_default().add(leaking);
    }
    groups
        .into_iter()
        .map(|(key, c)| RateRow { key, leaking: c.leaking, total: c.total })
        .collect()
}

/// Leaking/total per subreddit over all located items. Groups partition
/// the determinate corpus.
pub fn rate_by_subreddit(verdicts: &[DetectionVerdict]) -> Vec<RateRow> {
    rate_table(verdicts.iter().filter(|v| !v.undetermined).map(|v| {
        (
            v.meta.subreddit.clone().unwrap_or_else(|| "(none)".into()),
            v.leaking(),
        )
    }))
}

/// Per-domain leaking-item counts; an item flagging two domains
/// increments both.
pub fn count_by_domain(verdicts: &[DetectionVerdict]) -> BTreeMap<PrivacyDomain, u64> {
    let mut counts: BTreeMap<PrivacyDomain, u64> =
        PrivacyDomain::ALL.iter().map(|d| (*d, 0)).collect();
    for v in verdicts {
        if v.undetermined {
            continue;
        }
        for d in v.leaked_domains() {
            *counts.get_mut(&d).expect("all domains present") += 1;
        }
    }
    counts
}

/// Leaking writes / total writes per persona index, over testbed results.
pub fn rate_by_persona(results: &[EvalResult]) -> Vec<RateRow> {
    rate_table(results.iter().flat_map(|r| {
        let key = format!("persona-{}", r.config.persona_index);
        r.verdicts.iter().map(move |v| (key.clone(), v.leaking()))
    }))
}

/// Paired leak totals per backend, with and without the redaction
/// directive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedactRow {
    pub backend_id: String,
    pub with_directive: Counter,
    pub without_directive: Counter,
}

pub fn redact_comparison(results: &[EvalResult]) -> Vec<RedactRow> {
    let mut groups: BTreeMap<String, (Counter, Counter)> = BTreeMap::new();
    for r in results {
        let entry = groups.entry(r.config.backend_id.clone()).or_default();
        let counter = if r.config.redact { &mut entry.0 } else { &mut entry.1 };
        for v in &r.verdicts {
            counter.add(v.leaking());
        }
    }
    groups
        .into_iter()
        .map(|(backend_id, (with_directive, without_directive))| RedactRow {
            backend_id,
            with_directive,
            without_directive,
        })
        .collect()
}

/// Self-contained report: CSV tables plus a summary document, all with
/// stable schemas. Identical inputs yield byte-identical bundles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    /// File name → file contents.
    pub files: BTreeMap<String, String>,
}

fn fmt_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.6}"),
        None => "undefined".into(),
    }
}

pub fn report(
    verdicts: &[DetectionVerdict],
    results: &[EvalResult],
    days: u32,
    adjacency: Adjacency,
) -> ReportBundle {
    let mut files = BTreeMap::new();

    let mut csv = String::from("day,cumulative_leaking\n");
    for (day, total) in cumulative_leak_curve(verdicts, days).iter().enumerate() {
        csv.push_str(&format!("{day},{total}\n"));
    }
    files.insert("cumulative_leaks.csv".into(), csv);

    let mut csv = String::from("subreddit,leaking,total,rate\n");
    for row in rate_by_subreddit(verdicts) {
        csv.push_str(&format!("{},{},{},{:.6}\n", row.key, row.leaking, row.total, row.rate()));
    }
    files.insert("rate_by_subreddit.csv".into(), csv);

    let mut csv = String::from("domain,leaking_items\n");
    for (d, n) in count_by_domain(verdicts) {
        csv.push_str(&format!("{d},{n}\n"));
    }
    files.insert("count_by_domain.csv".into(), csv);

    let mut csv = String::from("persona,leaking,total,rate\n");
    for row in rate_by_persona(results) {
        csv.push_str(&format!("{},{},{},{:.6}\n", row.key, row.leaking, row.total, row.rate()));
    }
    files.insert("rate_by_persona.csv".into(), csv);

    let mut csv = String::from(
        "backend,leaks_with_directive,writes_with_directive,leaks_without_directive,writes_without_directive\n",
    );
    for row in redact_comparison(results) {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.backend_id,
            row.with_directive.leaking,
            row.with_directive.total,
            row.without_directive.leaking,
            row.without_directive.total,
        ));
    }
    files.insert("redact_comparison.csv".into(), csv);

    let stats = contagion_stats(verdicts, adjacency);
    let summary = format!(
        "# Leakage report\n\n\
items evaluated: {}\n\
evaluation runs: {}\n\n\
## Contagion (adjacency: {})\n\
qualifying pairs: {}\n\
p_after_leak: {} ({}/{})\n\
p_after_clean: {} ({}/{})\n\
p_baseline: {} ({}/{})\n\
ratio p_after_leak/p_after_clean: {}\n\
ratio p_after_leak/p_baseline: {}\n",
        verdicts.len(),
        results.len(),
        match stats.adjacency {
            Adjacency::CreationOrder => "creation-order",
            Adjacency::ParentChain => "parent-chain",
        },
        stats.pairs,
        fmt_opt(stats.p_after_leak()),
        stats.after_leak.leaking,
        stats.after_leak.total,
        fmt_opt(stats.p_after_clean()),
        stats.after_clean.leaking,
        stats.after_clean.total,
        fmt_opt(stats.p_baseline()),
        stats.baseline.leaking,
        stats.baseline.total,
        fmt_opt(stats.ratio_leak_over_clean()),
        fmt_opt(stats.ratio_leak_over_baseline()),
    );
    files.insert("summary.md".into(), summary);

    ReportBundle { files }
}

/// Synthetic reply-chain corpus with planted transition probabilities:
/// within each thread, a reply leaks with `p_after_leak` if its
/// predecessor leaked and `p_after_clean` otherwise. The oracle behind
/// the contagion estimator tests.
pub fn generate_contagion_corpus(
    threads: u64,
    replies_per_thread: u64,
    p_first: f64,
    p_after_leak: f64,
    p_after_clean: f64,
    rng_seed: u64,
) -> Vec<DetectionVerdict> {
    use crate::detector::DetectorKind;
    use crate::platform::AuthorHash;
    use rand::Rng;

    let mut out = Vec::with_capacity((threads * replies_per_thread) as usize);
    let mut seq = 0u64;
    for t in 0..threads {
        let mut rng = seed::rng(seed::derive_idx(rng_seed, "contagion-thread", t));
        let mut prev_leaked: Option<bool> = None;
        for _ in 0..replies_per_thread {
            seq += 1;
            let p = match prev_leaked {
                None => p_first,
                Some(true) => p_after_leak,
                Some(false) => p_after_clean,
            };
            let leaked = rng.gen_bool(p);
            let mut v = DetectionVerdict::empty(
                &format!("reply:{seq}"),
                AuthorHash::from("pop-synth"),
                DetectorKind::Pattern,
            );
            v.domains.insert(PrivacyDomain::GeneralIdentity, leaked);
            v.meta.kind = "reply".into();
            v.meta.post_id = Some(t + 1);
            v.meta.seq = seq;
            v.meta.day = (t % 25) as u32;
            prev_leaked = Some(leaked);
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::DetectorKind;
    use crate::platform::AuthorHash;

    fn reply(seq: u64, post: u64, parent: Option<u64>, leaked: bool) -> DetectionVerdict {
        let mut v = DetectionVerdict::empty(
            &format!("reply:{seq}"),
            AuthorHash::from("pop-a"),
            DetectorKind::Pattern,
        );
        v.domains.insert(PrivacyDomain::Finance, leaked);
        v.meta.kind = "reply".into();
        v.meta.post_id = Some(post);
        v.meta.seq = seq;
        v.meta.parent_seq = parent;
        v
    }

    #[test]
    fn alternating_thread_gives_degenerate_conditionals() {
        // L, C, L, C... : every successor of a leak is clean and vice versa
        let verdicts: Vec<DetectionVerdict> =
            (0..40).map(|i| reply(i + 1, 1, None, i % 2 == 0)).collect();
        let s = contagion_stats(&verdicts, Adjacency::CreationOrder);
        assert_eq!(s.p_after_leak(), Some(0.0));
        assert_eq!(s.p_after_clean(), Some(1.0));
        assert_eq!(s.pairs, 39);
        assert_eq!(s.baseline.total, 40);
    }

    #[test]
    fn empty_corpus_has_undefined_conditionals() {
        let s = contagion_stats(&[], Adjacency::CreationOrder);
        assert_eq!(s.p_after_leak(), None);
        assert_eq!(s.p_after_clean(), None);
        assert_eq!(s.p_baseline(), None);
        assert_eq!(s.pairs, 0);
    }

    #[test]
    fn parent_chain_adjacency_follows_the_tree() {
        // seq1 (leak) -> seq2 child (clean); seq3 top-level (clean) is a
        // creation-order successor of seq2 but has no parent.
        let verdicts = vec![
            reply(1, 1, None, true),
            reply(2, 1, Some(1), false),
            reply(3, 1, None, false),
        ];
        let chain = contagion_stats(&verdicts, Adjacency::ParentChain);
        assert_eq!(chain.pairs, 1);
        assert_eq!(chain.after_leak.total, 1);
        let order = contagion_stats(&verdicts, Adjacency::CreationOrder);
        assert_eq!(order.pairs, 2);
    }

    // Oracle recovery: planted Markov probabilities come back within
    // ±0.01 given ≥50k qualifying pairs.
    #[test]
    fn planted_transition_probabilities_are_recovered() {
        let verdicts = generate_contagion_corpus(2_000, 30, 0.018, 0.128, 0.016, 77);
        let s = contagion_stats(&verdicts, Adjacency::CreationOrder);
        assert!(s.pairs >= 50_000, "only {} pairs", s.pairs);
        let leak = s.p_after_leak().unwrap();
        let clean = s.p_after_clean().unwrap();
        assert!((leak - 0.128).abs() < 0.01, "p_after_leak {leak}");
        assert!((clean - 0.016).abs() < 0.01, "p_after_clean {clean}");
        let ratio = s.ratio_leak_over_clean().unwrap();
        assert!((7.0..=9.0).contains(&ratio), "ratio {ratio}");
    }

    // Law of total probability on the qualifying-pair subpopulation.
    #[test]
    fn conditionals_decompose_the_pair_population_exactly() {
        let verdicts = generate_contagion_corpus(200, 20, 0.1, 0.3, 0.05, 3);
        let s = contagion_stats(&verdicts, Adjacency::CreationOrder);
        assert_eq!(s.after_leak.total + s.after_clean.total, s.pairs);
        let pair_leaks = s.after_leak.leaking + s.after_clean.leaking;
        assert!(pair_leaks <= s.baseline.leaking);
    }

    #[test]
    fn cumulative_curve_is_monotone_and_correct() {
        let mut verdicts = vec![reply(1, 1, None, true)];
        verdicts[0].meta.day = 2;
        assert_eq!(cumulative_leak_curve(&verdicts, 5), [0, 0, 1, 1, 1]);
        assert_eq!(cumulative_leak_curve(&[], 3), [0, 0, 0]);
    }

    #[test]
    fn domain_counts_use_multi_flag_semantics() {
        let mut v = reply(1, 1, None, true);
        v.domains.insert(PrivacyDomain::Health, true);
        let counts = count_by_domain(&[v]);
        assert_eq!(counts[&PrivacyDomain::Finance], 1);
        assert_eq!(counts[&PrivacyDomain::Health], 1);
        assert_eq!(counts[&PrivacyDomain::Legal], 0);
    }

    #[test]
    fn subreddit_groups_partition_the_corpus() {
        let mut verdicts = Vec::new();
        for (i, sub) in [Some("a"), Some("a"), Some("b"), None].iter().enumerate() {
            let mut v = reply(i as u64 + 1, 1, None, i == 0);
            v.meta.subreddit = sub.map(String::from);
            verdicts.push(v);
        }
        let table = rate_by_subreddit(&verdicts);
        let total: u64 = table.iter().map(|r| r.total).sum();
        assert_eq!(total as usize, verdicts.len());
        let a = table.iter().find(|r| r.key == "a").unwrap();
        assert_eq!((a.leaking, a.total), (1, 2));
    }

    #[test]
    fn report_bundle_is_deterministic() {
        let verdicts = generate_contagion_corpus(20, 10, 0.1, 0.3, 0.05, 9);
        let a = report(&verdicts, &[], 25, Adjacency::CreationOrder);
        let b = report(&verdicts, &[], 25, Adjacency::CreationOrder);
        assert_eq!(a, b);
        assert!(a.files.contains_key("summary.md"));
        assert!(a.files["summary.md"].contains("p_after_leak"));
        assert!(a.files["cumulative_leaks.csv"].starts_with("day,"));
    }
}
