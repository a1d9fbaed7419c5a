//! The agent population: AI personas, seed identities, and synthetic human
//! profiles spanning the ten privacy domains.

pub mod domain;
pub mod identity;
pub mod intro;
pub mod offline;
pub mod profile;

pub use domain::PrivacyDomain;
pub use identity::{generate_seed_identity, SeedIdentity};
pub use intro::{
    classify_intro_post, classify_intro_post_offline, extract_persona, IntroClass, PersonaError,
};
pub use offline::{generate_persona_offline, generate_profile_offline};
pub use profile::{
    profile_from_json, validate_profile, AgentPersona, Attribute, HumanProfile,
    ProfileViolation, ValidationConfig,
};
