//! Darknet (Tor + i2p) link-graph analysis: ingestion, graph construction,
//! centrality metrics, reports and synthetic fixtures.

pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod probegen;
pub mod report;
