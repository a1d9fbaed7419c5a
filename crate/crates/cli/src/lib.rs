//! Pipeline library behind the `agora` binary: population build, organic
//! simulation, adversarial injection, testbed evaluation, leak detection,
//! and analytics, each a resumable stage writing digest-tracked artifacts.

pub mod config;
pub mod manifest;
pub mod stages;

use std::fmt;

/// Stage failure, mapped onto the process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable config, missing input artifacts → exit 2.
    Config(String),
    /// Model backend failure → exit 3.
    Backend(String),
    /// Generated or loaded data failed validation → exit 4.
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Backend(_) => 3,
            CliError::Validation(_) => 4,
        }
    }

    pub fn missing_input(path: &std::path::Path, produced_by: &str) -> CliError {
        CliError::Config(format!(
            "missing input artifact {} — run `agora {produced_by}` first",
            path.display()
        ))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Backend(m) => write!(f, "backend error: {m}"),
            CliError::Validation(m) => write!(f, "validation failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("io error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("json error: {e}"))
    }
}
