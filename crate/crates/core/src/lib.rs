//! Declarative data-quality checking for tabular open data.
//!
//! A `.dq` specification describes data objects field by field. The engine
//! measures a dataset against it and produces an error protocol with
//! per-field error rates; the profiler drafts a specification from raw data.

pub mod checks;
pub mod dataset_io;
pub mod engine;
pub mod spec_dsl;
pub mod profiler;
pub mod report;
