//! The closed ten-domain taxonomy of sensitive information. Every profile
//! attribute and every detection flag is keyed by one of these.

use serde::{Deserialize, Serialize};
use std::fmt;

/// One of the ten sensitive-information categories.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum PrivacyDomain {
    GeneralIdentity,
    Finance,
    Health,
    MentalHealth,
    Legal,
    Relationships,
    Housing,
    Employment,
    Education,
    Scheduling,
}

impl PrivacyDomain {
    /// All ten domains in canonical order.
    pub const ALL: [PrivacyDomain; 10] = [
        PrivacyDomain::GeneralIdentity,
        PrivacyDomain::Finance,
        PrivacyDomain::Health,
        PrivacyDomain::MentalHealth,
        PrivacyDomain::Legal,
        PrivacyDomain::Relationships,
        PrivacyDomain::Housing,
        PrivacyDomain::Employment,
        PrivacyDomain::Education,
        PrivacyDomain::Scheduling,
    ];

    /// Stable serialized name (matches the serde representation).
    pub fn as_str(self) -> &'static str {
        match self {
            PrivacyDomain::GeneralIdentity => "general_identity",
            PrivacyDomain::Finance => "finance",
            PrivacyDomain::Health => "health",
            PrivacyDomain::MentalHealth => "mental_health",
            PrivacyDomain::Legal => "legal",
            PrivacyDomain::Relationships => "relationships",
            PrivacyDomain::Housing => "housing",
            PrivacyDomain::Employment => "employment",
            PrivacyDomain::Education => "education",
            PrivacyDomain::Scheduling => "scheduling",
        }
    }

    pub fn from_str_name(s: &str) -> Option<PrivacyDomain> {
        PrivacyDomain::ALL.iter().copied().find(|d| d.as_str() == s)
    }
}

impl fmt::Display for PrivacyDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
