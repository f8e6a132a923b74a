//! Parsing, classifying and merging darknet domain/link data.

mod dataset;
mod domain;
mod extract;
mod load;

use std::path::PathBuf;

use thiserror::Error;

pub use dataset::{
    merge, normalize, normalize_with_rejects, write_dataset, write_dataset_to, write_rejects,
    Dataset, DatasetStats, EdgeOutcome, Reject,
};
pub use domain::{
    classify_domain, AddressKind, Domain, InvalidReason, Network, I2P_B32_LEN, ONION_V2_LEN,
    ONION_V3_LEN,
};
pub(crate) use domain::is_base32;
pub use extract::extract_domains;
pub use load::{load_edge_list, parse_edge_list, EdgeFormat, LoadReport, MalformedLine, RawRecord};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line} is not valid UTF-8")]
    Decode { path: PathBuf, line: u64 },
}
