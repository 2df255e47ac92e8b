//! Congested-Clique round accounting and a constant-approximation
//! all-pairs shortest paths pipeline.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs plus a [`RoundLedger`] that records the rounds a
//! Congested-Clique execution of the same computation would be charged.
//! Message payloads are materialized and delivered through the ledger, so
//! per-node loads are measured rather than assumed.
//!
//! Layout:
//!
//! | module | contents |
//! |---|---|
//! | [`graph`], [`matrix`], [`oracle`], [`estimate`], [`generate`] | data types, exact oracles, generators |
//! | [`ledger`] | the round ledger and validated routing / broadcast |
//! | [`primitives`] | zero-weight compression, spanners, hitting sets, sparse min-plus products |
//! | [`hopset`] | k-nearest hopsets built from an approximate distance estimate |
//! | [`knearest`] | filtered min-plus exponentiation via bins and h-combinations |
//! | [`skeleton`] | skeleton graphs and lifting of skeleton APSP |
//! | [`pipeline`] | the composed approximation algorithms |
//!
//! Node identifiers are `0..n` throughout; the text formats in the
//! companion crate use `1..=n`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod estimate;
pub mod generate;
pub mod graph;
pub mod hopset;
pub mod knearest;
pub mod ledger;
pub mod matrix;
pub mod oracle;
pub mod pipeline;
pub mod primitives;
pub mod rng;
pub mod skeleton;

mod math;

pub use error::{Error, Result};
pub use estimate::{DistanceEstimate, KNearestResult, LocalEstimate, RatioAudit};
pub use generate::{gen_graph, GraphSpec, WeightRange};
pub use graph::{Edge, Graph, GraphBuilder, NodeId, Weight, INF};
pub use ledger::{LedgerEntry, Message, MessageBatch, RoundLedger};
pub use matrix::TropicalMatrix;
pub use pipeline::{Mode, PipelineConfig, PipelineReport};
