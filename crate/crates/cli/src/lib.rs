//! Library side of the `clique-apsp` command: edge-list IO, experiment
//! runs with JSON/CSV reports, and the audit suites.

pub mod edgelist;
pub mod experiment;
pub mod suites;
