//! End-to-end driver for the blowup construction and its verifications.

pub mod pipeline;
pub mod report;
