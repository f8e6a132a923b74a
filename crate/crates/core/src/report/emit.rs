//! Report documents in JSON, Markdown and CSV.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::census::{CrossCensus, TOR_ONION_POPULATION};
use super::ranking::Ranking;
use super::ReportError;
use crate::ingest::Network;
use crate::metrics::{GraphMetrics, Metric};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Json,
    #[default]
    Markdown,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format '{s}'")),
        }
    }
}

/// Network metrics for the i2p-only, Tor-only and combined graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summaries {
    pub i2p: GraphMetrics,
    pub tor: GraphMetrics,
    pub combined: GraphMetrics,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Report {
    pub summaries: Option<Summaries>,
    pub census: Option<CrossCensus>,
    pub rankings: Vec<Ranking>,
}

/// Named text files making up one emitted report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub files: Vec<(String, String)>,
}

impl Document {
    /// Everything as one text stream. Multi-file documents get a `# name`
    /// line ahead of each file.
    pub fn to_text(&self) -> String {
        if let [(_, body)] = self.files.as_slice() {
            return body.clone();
        }
        let mut out = String::new();
        for (i, (name, body)) in self.files.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "# {name}");
            out.push_str(body);
        }
        out
    }

    /// Writes a single-file document to `path`, or every file into the
    /// directory `path` when there are several.
    pub fn write_to(&self, path: &Path) -> Result<(), ReportError> {
        let io = |e: std::io::Error| ReportError::Io {
            path: path.to_path_buf(),
            source: e,
        };
        if let [(_, body)] = self.files.as_slice() {
            return std::fs::write(path, body).map_err(io);
        }
        std::fs::create_dir_all(path).map_err(io)?;
        for (name, body) in &self.files {
            let file = path.join(name);
            std::fs::write(&file, body).map_err(|e| ReportError::Io { path: file, source: e })?;
        }
        Ok(())
    }
}

pub fn emit_report(report: &Report, format: Format) -> Document {
    let files = match format {
        Format::Json => vec![("report.json".to_string(), to_json(report))],
        Format::Markdown => vec![("report.md".to_string(), to_markdown(report))],
        Format::Csv => to_csv(report),
    };
    Document { files }
}

pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

pub(crate) fn fixed3(x: f64) -> String {
    format!("{x:.3}")
}

/// Three decimals, with values that would print as zero shown as `<0.001`.
pub(crate) fn density_cell(x: f64) -> String {
    if x > 0.0 && x < 0.0005 {
        "<0.001".to_string()
    } else {
        fixed3(x)
    }
}

/// Markdown rendering of a score: integers for degrees and betweenness.
pub fn format_score(metric: Metric, value: f64) -> String {
    match metric {
        Metric::InDegree | Metric::OutDegree | Metric::Betweenness => format!("{value:.0}"),
        Metric::HarmonicCloseness => fixed3(value),
        Metric::PageRank => format!("{value:.6}"),
    }
}

fn summary_rows(s: &Summaries) -> Vec<(&'static str, [String; 3])> {
    let cols = [&s.i2p, &s.tor, &s.combined];
    let row = |f: &dyn Fn(&GraphMetrics) -> String| [f(cols[0]), f(cols[1]), f(cols[2])];
    vec![
        ("Nodes", row(&|m| m.nodes.to_string())),
        ("Edges", row(&|m| m.edges.to_string())),
        ("Avg. Degree", row(&|m| fixed3(m.avg_degree))),
        ("Density", row(&|m| density_cell(m.density))),
        ("Avg. Path Length", row(&|m| fixed3(m.avg_path_length))),
        ("Diameter", row(&|m| m.diameter.to_string())),
        ("Connected Components", row(&|m| m.connected_components.to_string())),
    ]
}

fn census_rows(c: &CrossCensus) -> Vec<(&'static str, String)> {
    vec![
        ("i2p -> Tor edges", c.i2p_to_tor_edges.to_string()),
        ("Tor -> i2p edges", c.tor_to_i2p_edges.to_string()),
        ("Tor domains linked from i2p", c.tor_domains_linked_from_i2p.to_string()),
        ("i2p domains linked from Tor", c.i2p_domains_linked_from_tor.to_string()),
        ("i2p domains linking Tor", c.i2p_domains_linking_tor.to_string()),
        ("Tor domains linking i2p", c.tor_domains_linking_i2p.to_string()),
        ("Tor internal edges", c.tor_internal_edges.to_string()),
        ("i2p internal edges", c.i2p_internal_edges.to_string()),
        (
            "Tor coverage of 75k onion services",
            format!("{:.1}%", 100.0 * c.tor_coverage(TOR_ONION_POPULATION)),
        ),
    ]
}

fn ranking_title(r: &Ranking) -> String {
    let base = match r.metric {
        Metric::InDegree => "Nodes with the highest in-degree",
        Metric::OutDegree => "Nodes with the highest out-degree",
        Metric::HarmonicCloseness => "Nodes with the highest harmonic closeness",
        Metric::Betweenness => "Nodes with the highest betweenness",
        Metric::PageRank => "Nodes with the highest PageRank",
    };
    match r.filter {
        Some(net) => format!("{base} ({net} only)"),
        None => base.to_string(),
    }
}

fn ranking_file(r: &Ranking) -> String {
    match r.filter {
        Some(Network::Tor) => format!("ranking-{}-tor.csv", r.metric.slug()),
        Some(Network::I2p) => format!("ranking-{}-i2p.csv", r.metric.slug()),
        None => format!("ranking-{}.csv", r.metric.slug()),
    }
}

pub fn to_markdown(report: &Report) -> String {
    let mut out = String::new();
    if let Some(s) = &report.summaries {
        out.push_str("## Network metrics\n\n");
        out.push_str("| Metric | i2p (eepsites) | Tor (hidden services) | i2p + Tor (eepsites + hidden services) |\n");
        out.push_str("|---|---:|---:|---:|\n");
        for (name, [a, b, c]) in summary_rows(s) {
            let _ = writeln!(out, "| {name} | {a} | {b} | {c} |");
        }
        let _ = writeln!(
            out,
            "\nPath statistics over {} pairs; {} components.\n",
            s.combined.pair_semantics, s.combined.component_mode
        );
    }
    if let Some(c) = &report.census {
        out.push_str("## Cross-network links\n\n| Quantity | Count |\n|---|---:|\n");
        for (name, value) in census_rows(c) {
            let _ = writeln!(out, "| {name} | {value} |");
        }
        out.push('\n');
    }
    for r in &report.rankings {
        let _ = writeln!(out, "## {}\n", ranking_title(r));
        let _ = writeln!(out, "| Rank | Domain | Network | {} |", r.metric.header());
        out.push_str("|---:|---|---|---:|\n");
        for e in &r.entries {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                e.rank,
                e.domain,
                e.network,
                format_score(r.metric, e.value)
            );
        }
        out.push('\n');
    }
    out
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 fields")
}

fn to_csv(report: &Report) -> Vec<(String, String)> {
    let mut files = Vec::new();
    if let Some(s) = &report.summaries {
        let rows = summary_rows(s)
            .into_iter()
            .map(|(name, [a, b, c])| vec![name.to_string(), a, b, c]);
        files.push((
            "network-metrics.csv".to_string(),
            csv_text(&["metric", "i2p", "tor", "combined"], rows),
        ));
    }
    if let Some(c) = &report.census {
        let rows = census_rows(c)
            .into_iter()
            .map(|(name, value)| vec![name.to_string(), value]);
        files.push(("census.csv".to_string(), csv_text(&["quantity", "count"], rows)));
    }
    for r in &report.rankings {
        // Full precision here: CSV is for downstream processing.
        let rows = r.entries.iter().map(|e| {
            vec![
                e.rank.to_string(),
                e.domain.clone(),
                e.network.to_string(),
                e.value.to_string(),
            ]
        });
        files.push((
            ranking_file(r),
            csv_text(&["rank", "domain", "network", r.metric.slug()], rows),
        ));
    }
    files
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{degrees, subgraph_by_network};
    use crate::metrics::{graph_summary, pagerank, PageRankConfig, SummaryOptions};
    use crate::probegen::{graph_from_edges, random_digraph};
    use crate::report::{cross_census, top_k};

    fn report_for(g: &crate::graph::LinkGraph) -> Report {
        let opts = SummaryOptions::default();
        let summaries = Summaries {
            i2p: graph_summary(&subgraph_by_network(g, Network::I2p), opts),
            tor: graph_summary(&subgraph_by_network(g, Network::Tor), opts),
            combined: graph_summary(g, opts),
        };
        let (in_deg, _) = degrees(g);
        let pr = pagerank(g, PageRankConfig::default());
        Report {
            summaries: Some(summaries),
            census: Some(cross_census(g)),
            rankings: vec![top_k(&in_deg, g, 5, None), top_k(&pr, g, 5, Some(Network::Tor))],
        }
    }

    #[test]
    fn three_cycle_markdown() {
        let g = graph_from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let md = to_markdown(&report_for(&g));
        assert!(md.contains(
            "| Metric | i2p (eepsites) | Tor (hidden services) | i2p + Tor (eepsites + hidden services) |"
        ));
        assert!(md.contains("| Nodes | 3 | 0 | 3 |"));
        assert!(md.contains("| Avg. Degree | 1.000 | 0.000 | 1.000 |"));
        assert!(md.contains("| Density | 0.500 | 0.000 | 0.500 |"));
        assert!(md.contains("| Avg. Path Length | 1.500 | 0.000 | 1.500 |"));
        assert!(md.contains("| Rank | Domain | Network | In-Degree |"));
    }

    #[test]
    fn tiny_density_prints_below_threshold() {
        assert_eq!(density_cell(304673.0 / (49249.0 * 49248.0)), "<0.001");
        assert_eq!(density_cell(13857.0 / (2687.0 * 2686.0)), "0.002");
        assert_eq!(density_cell(0.0), "0.000");
    }

    #[test]
    fn json_round_trip_is_fixed_point() {
        let g = random_digraph(40, 0.08, 21);
        let report = report_for(&g);
        let json = to_json(&report);
        let back = from_json(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(to_json(&back), json);
    }

    #[test]
    fn csv_has_one_file_per_table() {
        let g = random_digraph(20, 0.1, 4);
        let doc = emit_report(&report_for(&g), Format::Csv);
        let names: Vec<&str> = doc.files.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(
            names,
            vec!["network-metrics.csv", "census.csv", "ranking-in-degree.csv", "ranking-pagerank-tor.csv"]
        );
        let metrics = &doc.files[0].1;
        assert_eq!(metrics.lines().count(), 8);
        assert!(metrics.starts_with("metric,i2p,tor,combined\n"));

        let dir = tempfile::tempdir().unwrap();
        doc.write_to(dir.path()).unwrap();
        assert!(dir.path().join("census.csv").exists());
    }

    #[test]
    fn output_is_stable() {
        let g = random_digraph(30, 0.1, 8);
        for format in [Format::Json, Format::Markdown, Format::Csv] {
            assert_eq!(emit_report(&report_for(&g), format), emit_report(&report_for(&g), format));
        }
    }
}
