//! The deterministic pattern pipeline: each profile attribute value is
//! compiled into normalized-literal and digit-stream matchers, and content
//! is scanned in the same normalized space.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::normalize::{digit_stream, normalize};
use super::{DetectionVerdict, DetectorKind, MatchedAttribute};
use crate::persona::{HumanProfile, PrivacyDomain};

/// Tunables for matcher compilation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternConfig {
    /// Values shorter than this after normalization are excluded.
    pub min_len: usize,
    /// Normalized values to skip entirely (e.g. values shared by a large
    /// fraction of profiles, which would only produce false positives).
    pub blocklist: BTreeSet<String>,
    /// Minimum digits for a digit-stream matcher.
    pub min_digits: usize,
}

impl Default for PatternConfig {
    fn default() -> Self {
        PatternConfig { min_len: 4, blocklist: BTreeSet::new(), min_digits: 4 }
    }
}

/// One compiled matcher; always traces back to exactly one attribute.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Matcher {
    pub domain: PrivacyDomain,
    pub key: String,
    /// Normalized literal of the source value.
    pub literal: String,
    /// Digit stream of the source value, when long enough to be specific.
    pub digits: Option<String>,
}

/// All matchers compiled from one profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternSet {
    pub profile_id: String,
    pub matchers: Vec<Matcher>,
}

/// Values appearing in more than `fraction` of the given profiles, as a
/// blocklist against trivially common values.
pub fn common_values(profiles: &[HumanProfile], fraction: f64) -> BTreeSet<String> {
    let mut counts: std::collections::BTreeMap<String, usize> = Default::default();
    for p in profiles {
        let distinct: BTreeSet<String> =
            p.iter_attributes().map(|(_, _, v)| normalize(v)).collect();
        for v in distinct {
            *counts.entry(v).or_default() += 1;
        }
    }
    let threshold = (fraction * profiles.len() as f64).ceil() as usize;
    counts
        .into_iter()
        .filter(|(_, c)| *c > threshold)
        .map(|(v, _)| v)
        .collect()
}

pub fn compile_patterns(profile: &HumanProfile) -> PatternSet {
    compile_patterns_with(profile, &PatternConfig::default())
}

/// Deterministically compile one matcher group per attribute value that
/// survives the length floor and blocklist.
pub fn compile_patterns_with(profile: &HumanProfile, cfg: &PatternConfig) -> PatternSet {
    let mut matchers = Vec::new();
    for (domain, key, value) in profile.iter_attributes() {
        let literal = normalize(value);
        if literal.len() < cfg.min_len || cfg.blocklist.contains(&literal) {
            continue;
        }
        let ds = digit_stream(value);
        let digits = if ds.len() >= cfg.min_digits { Some(ds) } else { None };
        matchers.push(Matcher { domain, key: key.to_string(), literal, digits });
    }
    PatternSet { profile_id: profile.profile_id.clone(), matchers }
}

/// Scan one content item against a compiled pattern set. Pure function:
/// flags every domain with at least one hit and records each matched span.
pub fn detect_with_patterns(
    content_ref: &str,
    content: &str,
    author: &crate::platform::AuthorHash,
    set: &PatternSet,
) -> DetectionVerdict {
    let mut verdict = DetectionVerdict::empty(content_ref, author.clone(), DetectorKind::Pattern);
    let haystack = normalize(content);
    let haystack_digits = digit_stream(content);
    for m in &set.matchers {
        let mut span = None;
        if haystack.contains(&m.literal) {
            span = Some(m.literal.clone());
        } else if let Some(d) = &m.digits {
            if haystack_digits.contains(d) {
                span = Some(d.clone());
            }
        }
        if let Some(matched_span) = span {
            verdict.domains.insert(m.domain, true);
            verdict.matched.push(MatchedAttribute {
                domain: m.domain,
                key: m.key.clone(),
                matched_span,
            });
        }
    }
    verdict
}
