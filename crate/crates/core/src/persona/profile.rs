//! Human profiles and agent personas: the ground truth against which every
//! leakage verdict is judged.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use super::domain::PrivacyDomain;
use super::identity::SeedIdentity;

/// One sensitive attribute: a key (e.g. `"employer"`) and a concrete value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub key: String,
    pub value: String,
}

/// A synthetic human's private profile spanning the ten privacy domains.
///
/// File format: `{profile_id, seed:{...}, attributes:{domain:[{key,value},...]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HumanProfile {
    pub profile_id: String,
    pub seed: SeedIdentity,
    pub attributes: BTreeMap<PrivacyDomain, Vec<Attribute>>,
}

impl HumanProfile {
    pub fn attribute_count(&self) -> usize {
        self.attributes.values().map(Vec::len).sum()
    }

    /// Iterate all `(domain, key, value)` triples in canonical domain order.
    pub fn iter_attributes(&self) -> impl Iterator<Item = (PrivacyDomain, &str, &str)> {
        self.attributes.iter().flat_map(|(d, attrs)| {
            attrs.iter().map(move |a| (*d, a.key.as_str(), a.value.as_str()))
        })
    }

    /// Held-out evaluation profiles live in a distinct id namespace from the
    /// population, so the two sets can never overlap.
    pub fn is_held_out(&self) -> bool {
        self.profile_id.starts_with("eval-")
    }
}

/// An AI persona extracted from (or generated in the style of) a
/// self-introduction post.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct AgentPersona {
    pub name: String,
    pub behavioral_tendencies: Vec<String>,
    pub preferred_subreddits: Vec<String>,
    pub vocabulary: Vec<String>,
    pub seed_post: String,
}

/// Tunable validation bounds for generated profiles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub min_attributes: usize,
    pub max_attributes: usize,
    /// Case-insensitive tokens that mark a value as a placeholder.
    pub placeholder_tokens: Vec<String>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        // Band is +/- 2.5 sigma around the target of 97 +/- 16 attributes.
        ValidationConfig {
            min_attributes: 60,
            max_attributes: 140,
            placeholder_tokens: vec![
                "tbd".into(),
                "n/a".into(),
                "[...]".into(),
                "todo".into(),
                "unknown".into(),
                "placeholder".into(),
                "<value>".into(),
                "xxx".into(),
            ],
        }
    }
}

/// One problem found by [`validate_profile`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileViolation {
    EmptyValue { domain: PrivacyDomain, key: String },
    PlaceholderValue { domain: PrivacyDomain, key: String, value: String },
    AttributeCountOutOfBand { count: usize, min: usize, max: usize },
    UnknownDomain { domain: String },
}

impl fmt::Display for ProfileViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileViolation::EmptyValue { domain, key } => {
                write!(f, "empty value for {domain}/{key}")
            }
            ProfileViolation::PlaceholderValue { domain, key, value } => {
                write!(f, "placeholder value for {domain}/{key}: {value:?}")
            }
            ProfileViolation::AttributeCountOutOfBand { count, min, max } => {
                write!(f, "attribute count {count} outside [{min}, {max}]")
            }
            ProfileViolation::UnknownDomain { domain } => {
                write!(f, "unknown privacy domain {domain:?}")
            }
        }
    }
}

/// Check a profile against the validation bounds. An empty result means the
/// profile is acceptable.
pub fn validate_profile(profile: &HumanProfile, cfg: &ValidationConfig) -> Vec<ProfileViolation> {
    let mut out = Vec::new();
    let count = profile.attribute_count();
    if count < cfg.min_attributes || count > cfg.max_attributes {
        out.push(ProfileViolation::AttributeCountOutOfBand {
            count,
            min: cfg.min_attributes,
            max: cfg.max_attributes,
        });
    }
    for (domain, key, value) in profile.iter_attributes() {
        let trimmed = value.trim();
        if trimmed.is_empty() {
            out.push(ProfileViolation::EmptyValue { domain, key: key.to_string() });
            continue;
        }
        let lower = trimmed.to_lowercase();
        if cfg.placeholder_tokens.iter().any(|t| lower == *t || lower.contains(t.as_str())) {
            out.push(ProfileViolation::PlaceholderValue {
                domain,
                key: key.to_string(),
                value: value.to_string(),
            });
        }
    }
    out
}

/// Parse a user-supplied profile JSON value, reporting unknown domain keys
/// as violations instead of hard-failing the whole file.
pub fn profile_from_json(
    value: &serde_json::Value,
) -> Result<(HumanProfile, Vec<ProfileViolation>), serde_json::Error> {
    #[derive(Deserialize)]
    struct Raw {
        profile_id: String,
        seed: SeedIdentity,
        attributes: BTreeMap<String, Vec<Attribute>>,
    }
    let raw: Raw = serde_json::from_value(value.clone())?;
    let mut violations = Vec::new();
    let mut attributes: BTreeMap<PrivacyDomain, Vec<Attribute>> = BTreeMap::new();
    for (name, attrs) in raw.attributes {
        match PrivacyDomain::from_str_name(&name) {
            Some(domain) => {
                attributes.entry(domain).or_default().extend(attrs);
            }
            None => violations.push(ProfileViolation::UnknownDomain { domain: name }),
        }
    }
    Ok((
        HumanProfile { profile_id: raw.profile_id, seed: raw.seed, attributes },
        violations,
    ))
}
