//! Simulation and evaluation harness for privacy leakage in multi-agent
//! social platforms.
//!
//! The crate is organized around a Reddit-style platform store with a
//! twelve-tool API ([`platform`]), a synthetic agent population
//! ([`persona`]), an autonomous tool-calling agent loop ([`runtime`]),
//! adversarial content injection ([`adversary`]), per-domain leakage
//! detection ([`detector`]), a frozen-snapshot evaluation testbed
//! ([`testbed`]), and batch statistics over the resulting verdict tables
//! ([`analytics`]).
//!
//! Everything is runnable fully offline: scripted policy backends stand in
//! for live models, so every reported statistic can be checked against a
//! generator with known parameters.

pub mod adversary;
pub mod analytics;
pub mod backend;
pub mod detector;
pub mod persona;
pub mod platform;
pub mod runtime;
pub mod seed;
pub mod testbed;
