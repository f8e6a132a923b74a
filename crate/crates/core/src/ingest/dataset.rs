//! The canonical node/edge set and its CSV form.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::ops::AddAssign;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::domain::{classify_domain, Domain, InvalidReason};
use super::load::RawRecord;
use super::IngestError;

/// Provenance counters accumulated while normalizing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub raw_records: u64,
    pub dropped_self_loops: u64,
    pub dropped_duplicates: u64,
    pub dropped_non_darknet: u64,
    pub dropped_invalid: u64,
    /// Node-only records whose name did not classify.
    pub rejected_nodes: u64,
}

impl AddAssign for DatasetStats {
    fn add_assign(&mut self, rhs: Self) {
        self.raw_records += rhs.raw_records;
        self.dropped_self_loops += rhs.dropped_self_loops;
        self.dropped_duplicates += rhs.dropped_duplicates;
        self.dropped_non_darknet += rhs.dropped_non_darknet;
        self.dropped_invalid += rhs.dropped_invalid;
        self.rejected_nodes += rhs.rejected_nodes;
    }
}

/// Outcome of offering one edge to a [`Dataset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOutcome {
    Inserted,
    SelfLoop,
    Duplicate,
}

/// A rejected record, as written to the rejects log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reject {
    pub line: u64,
    pub reason: String,
    pub raw: String,
}

/// Darknet domains and the directed links between them.
///
/// Never holds a self-loop or a repeated `(src, dst)` pair, and every edge
/// endpoint is also a node. Equality compares content only; `stats` is
/// provenance.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    nodes: BTreeSet<Domain>,
    edges: BTreeSet<(Domain, Domain)>,
    pub stats: DatasetStats,
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for Dataset {}

impl Dataset {
    pub fn new() -> Dataset {
        Dataset::default()
    }

    pub fn nodes(&self) -> &BTreeSet<Domain> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(Domain, Domain)> {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, domain: &Domain) -> bool {
        self.nodes.contains(domain)
    }

    pub fn insert_node(&mut self, domain: Domain) -> bool {
        self.nodes.insert(domain)
    }

    /// Adds `src -> dst` and both endpoints, unless it is a self-loop or already present.
    pub fn insert_edge(&mut self, src: Domain, dst: Domain) -> EdgeOutcome {
        if src == dst {
            return EdgeOutcome::SelfLoop;
        }
        if self.edges.contains(&(src.clone(), dst.clone())) {
            return EdgeOutcome::Duplicate;
        }
        if !self.nodes.contains(&src) {
            self.nodes.insert(src.clone());
        }
        if !self.nodes.contains(&dst) {
            self.nodes.insert(dst.clone());
        }
        self.edges.insert((src, dst));
        EdgeOutcome::Inserted
    }

    /// Records that reproduce this dataset: one per edge, then one per node
    /// not touched by any edge.
    pub fn to_records(&self) -> Vec<RawRecord> {
        let mut touched: BTreeSet<&Domain> = BTreeSet::new();
        let mut out = Vec::with_capacity(self.edges.len());
        for (src, dst) in &self.edges {
            touched.insert(src);
            touched.insert(dst);
            out.push(RawRecord::edge("dataset", src.canonical(), dst.canonical(), 0));
        }
        for node in self.nodes.iter().filter(|n| !touched.contains(n)) {
            out.push(RawRecord::node("dataset", node.canonical(), 0));
        }
        for (i, r) in out.iter_mut().enumerate() {
            r.line = i as u64 + 2;
        }
        out
    }
}

/// Normalizes raw records into a [`Dataset`].
pub fn normalize(records: &[RawRecord]) -> Dataset {
    normalize_with_rejects(records).0
}

/// Like [`normalize`], also returning one [`Reject`] per dropped record.
///
/// An edge with any unusable endpoint is dropped whole. Malformed darknet
/// names (bad length, bad alphabet, empty) count as `dropped_invalid` and take
/// precedence over surface-web names, which count as `dropped_non_darknet`.
pub fn normalize_with_rejects(records: &[RawRecord]) -> (Dataset, Vec<Reject>) {
    let mut dataset = Dataset::new();
    let mut rejects = Vec::new();
    for record in records {
        dataset.stats.raw_records += 1;
        let Some(dst_raw) = record.dst.as_deref() else {
            match classify_domain(&record.src) {
                Ok(d) => {
                    dataset.insert_node(d);
                }
                Err(reason) => {
                    dataset.stats.rejected_nodes += 1;
                    rejects.push(Reject {
                        line: record.line,
                        reason: reason.code().to_string(),
                        raw: record.src.clone(),
                    });
                }
            }
            continue;
        };

        let raw = || format!("{},{}", record.src, dst_raw);
        let (src, dst) = match (classify_domain(&record.src), classify_domain(dst_raw)) {
            (Ok(s), Ok(d)) => (s, d),
            (s, d) => {
                let reasons = [s.err(), d.err()];
                let reason = reasons
                    .iter()
                    .flatten()
                    .copied()
                    .find(|r| *r != InvalidReason::BadTld)
                    .unwrap_or(InvalidReason::BadTld);
                if reason == InvalidReason::BadTld {
                    dataset.stats.dropped_non_darknet += 1;
                } else {
                    dataset.stats.dropped_invalid += 1;
                }
                rejects.push(Reject {
                    line: record.line,
                    reason: reason.code().to_string(),
                    raw: raw(),
                });
                continue;
            }
        };
        let reason = match dataset.insert_edge(src, dst) {
            EdgeOutcome::Inserted => continue,
            EdgeOutcome::SelfLoop => {
                dataset.stats.dropped_self_loops += 1;
                "self-loop"
            }
            EdgeOutcome::Duplicate => {
                dataset.stats.dropped_duplicates += 1;
                "duplicate"
            }
        };
        rejects.push(Reject {
            line: record.line,
            reason: reason.to_string(),
            raw: raw(),
        });
    }
    (dataset, rejects)
}

/// Union of two datasets. Nodes and edges already present in `a` keep
/// `a`'s raw spelling; counters are summed.
pub fn merge(a: &Dataset, b: &Dataset) -> Dataset {
    let mut out = a.clone();
    out.nodes.extend(b.nodes.iter().cloned());
    out.edges.extend(b.edges.iter().cloned());
    out.stats += b.stats;
    out
}

/// Writes the canonical CSV form: header `src,dst`, edges sorted by
/// `(src, dst)`, then nodes without edges as `name,` lines. LF endings.
pub fn write_dataset_to<W: Write>(dataset: &Dataset, mut out: W) -> std::io::Result<()> {
    out.write_all(b"src,dst\n")?;
    let mut touched: BTreeSet<&Domain> = BTreeSet::new();
    for (src, dst) in &dataset.edges {
        touched.insert(src);
        touched.insert(dst);
        writeln!(out, "{},{}", src.canonical(), dst.canonical())?;
    }
    for node in dataset.nodes.iter().filter(|n| !touched.contains(n)) {
        writeln!(out, "{},", node.canonical())?;
    }
    out.flush()
}

pub fn write_dataset(dataset: &Dataset, path: &Path) -> Result<(), IngestError> {
    let io_err = |source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_dataset_to(dataset, BufWriter::new(file)).map_err(io_err)
}

/// Writes rejects as CSV `line,reason,raw`.
pub fn write_rejects<W: Write>(rejects: &[Reject], out: W) -> Result<(), csv::Error> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(["line", "reason", "raw"])?;
    for r in rejects {
        writer.write_record([r.line.to_string().as_str(), &r.reason, &r.raw])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_edge_list, EdgeFormat};
    use proptest::prelude::*;

    const A: &str = "aaaaaaaaaaaaaaaa.onion";
    const B: &str = "bbbbbbbbbbbbbbbb.onion";
    const C: &str = "stats.i2p";

    fn e(src: &str, dst: &str) -> RawRecord {
        RawRecord::edge("t", src, dst, 1)
    }

    fn d(name: &str) -> Domain {
        classify_domain(name).unwrap()
    }

    fn reload(dataset: &Dataset) -> (Vec<u8>, Dataset) {
        let mut buf = Vec::new();
        write_dataset_to(dataset, &mut buf).unwrap();
        let report = parse_edge_list(&buf, "buf", &EdgeFormat::canonical()).unwrap();
        assert!(report.malformed.is_empty());
        (buf, normalize(&report.records))
    }

    #[test]
    fn duplicates_and_self_loops_are_counted() {
        let ds = normalize(&[e(A, B), e(A, B), e(A, A)]);
        assert_eq!(ds.node_count(), 2);
        assert_eq!(ds.edge_count(), 1);
        assert!(ds.edges().contains(&(d(A), d(B))));
        assert_eq!(ds.stats.dropped_duplicates, 1);
        assert_eq!(ds.stats.dropped_self_loops, 1);
        assert_eq!(ds.stats.raw_records, 3);
    }

    #[test]
    fn surface_endpoint_drops_edge_and_orphan() {
        let ds = normalize(&[e(A, "example.com")]);
        assert_eq!(ds.node_count(), 0);
        assert_eq!(ds.edge_count(), 0);
        assert_eq!(ds.stats.dropped_non_darknet, 1);

        let ds = normalize(&[e(A, "example.com"), RawRecord::node("t", A, 2)]);
        assert_eq!(ds.node_count(), 1);
        assert_eq!(ds.stats.dropped_non_darknet, 1);
    }

    #[test]
    fn invalid_beats_non_darknet() {
        let (ds, rejects) = normalize_with_rejects(&[e("abc.onion", "example.com")]);
        assert_eq!(ds.stats.dropped_invalid, 1);
        assert_eq!(ds.stats.dropped_non_darknet, 0);
        assert_eq!(rejects[0].reason, "bad-length");
    }

    #[test]
    fn case_variants_collapse() {
        let upper = A.to_uppercase();
        let ds = normalize(&[e(A, B), e(&upper, B)]);
        assert_eq!(ds.edge_count(), 1);
        assert_eq!(ds.stats.dropped_duplicates, 1);
    }

    #[test]
    fn merge_identity_idempotence_union() {
        let x = normalize(&[e(A, B), e(B, C)]);
        assert_eq!(merge(&x, &Dataset::new()), x);
        assert_eq!(merge(&x, &x), x);

        let left = normalize(&[e(A, B)]);
        let right = normalize(&[e(B, C)]);
        let both = merge(&left, &right);
        assert_eq!(both.node_count(), 3);
        assert_eq!(both.edge_count(), 2);
        assert_eq!(both.stats.raw_records, 2);
    }

    #[test]
    fn triangle_round_trip() {
        let tri = normalize(&[e(A, B), e(B, C), e(C, A)]);
        let (_, back) = reload(&tri);
        assert_eq!(back, tri);
    }

    #[test]
    fn empty_dataset_is_header_only() {
        let mut buf = Vec::new();
        write_dataset_to(&Dataset::new(), &mut buf).unwrap();
        assert_eq!(buf, b"src,dst\n");
    }

    #[test]
    fn isolated_nodes_survive_round_trip() {
        let ds = normalize(&[e(A, B), RawRecord::node("t", C, 2)]);
        let (text, back) = reload(&ds);
        assert_eq!(back, ds);
        assert!(String::from_utf8(text).unwrap().ends_with("stats.i2p,\n"));
    }

    #[test]
    fn rejects_log_format() {
        let (_, rejects) = normalize_with_rejects(&[e(A, A), e("x,y", "example.com")]);
        let mut buf = Vec::new();
        write_rejects(&rejects, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            format!("line,reason,raw\n1,self-loop,\"{A},{A}\"\n1,bad-tld,\"x,y,example.com\"\n")
        );
    }

    fn arb_name() -> impl Strategy<Value = String> {
        prop_oneof![
            3 => prop::sample::select(vec![A, B, C, "no.i2p", "ABCDEFGHIJKLMNOP.onion"]).prop_map(String::from),
            1 => prop::sample::select(vec!["example.com", "abc.onion", "", "bad_x.i2p", "x"]).prop_map(String::from),
        ]
    }

    proptest! {
        #[test]
        fn conservation_and_idempotence(
            pairs in prop::collection::vec((arb_name(), prop::option::weighted(0.9, arb_name())), 0..60)
        ) {
            let records: Vec<RawRecord> = pairs
                .iter()
                .enumerate()
                .map(|(i, (s, t))| RawRecord {
                    source_id: "p".into(),
                    src: s.clone(),
                    dst: t.clone(),
                    line: i as u64 + 1,
                })
                .collect();
            let ds = normalize(&records);
            let edge_records = records.iter().filter(|r| r.is_edge()).count() as u64;
            let s = ds.stats;
            prop_assert_eq!(
                ds.edge_count() as u64 + s.dropped_duplicates + s.dropped_self_loops
                    + s.dropped_non_darknet + s.dropped_invalid,
                edge_records
            );
            for (src, dst) in ds.edges() {
                prop_assert!(src != dst);
                prop_assert!(ds.contains(src) && ds.contains(dst));
            }
            prop_assert_eq!(normalize(&ds.to_records()), ds.clone());
            let (first, back) = reload(&ds);
            prop_assert_eq!(&back, &ds);
            let (second, _) = reload(&back);
            prop_assert_eq!(first, second);
        }
    }
}
