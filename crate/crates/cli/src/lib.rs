//! Batch front-end: seeded instances, verification suites, reports and flows.

pub mod commands;
pub mod error;
pub mod gen;
pub mod suites;
