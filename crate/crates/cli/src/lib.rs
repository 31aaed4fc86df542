//! Support library for the `infmot` binary: problem documents, report
//! rendering, seeded instance generation, verification suites, and
//! textual word formats.

pub mod error;
pub mod gen;
pub mod problem;
pub mod report;
pub mod suites;
pub mod words;
