//! Rankings, cross-network census, report documents, DOT export, the
//! replication harness and the command-line front end.

pub mod cli;
mod census;
mod dot;
mod emit;
mod ranking;
mod replicate;

use std::path::PathBuf;

use thiserror::Error;

pub use census::{cross_census, CrossCensus, TOR_ONION_POPULATION};
pub use dot::{export_dot, network_class, ComponentFilter, DotOptions};
pub use emit::{emit_report, format_score, from_json, to_json, to_markdown, Document, Format, Report, Summaries};
pub use ranking::{domain_matches, order_nodes, top_k, RankEntry, Ranking};
pub use replicate::{
    is_transposition, judge, replicate, Check, PrintedColumn, PrintedRow, Replication,
    ReplicateOptions, Verdict, PRINTED_I2P_TO_TOR, PRINTED_METRICS, PRINTED_ROWS,
    PRINTED_TOR_TO_I2P,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
