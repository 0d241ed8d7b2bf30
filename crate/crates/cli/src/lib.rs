//! Command-line interface and HTTP service for the ontology workbench.

pub mod api;
pub mod commands;
pub mod config;
pub mod inputs;
pub mod report;
pub mod store;
