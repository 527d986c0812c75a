//! Deterministic verification harness for the spectral-shift trace
//! identities: seeded generators, experiment configuration, the four
//! verification suites and report emission.

pub mod config;
pub mod gen;
pub mod report;
pub mod rng;
pub mod suites;
