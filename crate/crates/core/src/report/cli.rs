//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for input errors and bad usage, 2 for
//! internal failures.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::{
    cross_census, emit_report, export_dot, replicate, top_k, ComponentFilter, Document, DotOptions,
    Format, Replication, ReplicateOptions, Report, Summaries,
};
use crate::graph::{build_graph, degrees, subgraph_by_network, LinkGraph};
use crate::ingest::{
    extract_domains, load_edge_list, normalize_with_rejects, write_dataset_to, write_rejects,
    AddressKind, EdgeFormat, Network,
};
use crate::metrics::{
    betweenness, graph_summary, harmonic_closeness, pagerank, BetweennessStrategy, ComponentMode,
    Direction, Metric, PageRankConfig, PairSemantics, ScoreVector, SummaryOptions,
};
use crate::probegen::{check_membership, generate_candidates, synth_graph, CandidateSpec, Position, SynthSpec};

pub const THREADS_ENV: &str = "DARKNET_GRAPH_THREADS";

#[derive(Debug, Parser)]
#[command(name = "darknet-graph", version, about = "Tor and i2p link-graph analysis")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Output format: markdown, json or csv.
    #[arg(long, global = true, default_value = "markdown")]
    format: Format,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = THREADS_ENV, default_value_t = 0)]
    threads: usize,
    /// Seed for sampling and generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Distance direction for closeness: out, in or undirected.
    #[arg(long, global = true, default_value = "out")]
    direction: Direction,
    /// Connected-component notion: weak or strong.
    #[arg(long, global = true, default_value = "weak")]
    component_mode: ComponentMode,
    /// Pairs counted in path statistics: directed or undirected.
    #[arg(long, global = true, default_value = "directed")]
    pair_semantics: PairSemantics,
    /// Write here instead of stdout. Multi-file CSV output takes a directory.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalize edge lists into one canonical dataset.
    Ingest {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Tab-separated input.
        #[arg(long)]
        tsv: bool,
        /// Write rejected records here as CSV.
        #[arg(long)]
        rejects: Option<PathBuf>,
    },
    /// List darknet domains mentioned in text files (stdin when none given).
    Extract { files: Vec<PathBuf> },
    /// Network metrics for the i2p, Tor and combined graphs.
    Summary { dataset: PathBuf },
    /// Top nodes by one metric.
    Rank {
        dataset: PathBuf,
        #[arg(long)]
        metric: Metric,
        #[arg(short, long, default_value_t = 10)]
        k: usize,
        /// Only list nodes of this network (tor or i2p).
        #[arg(long, value_parser = parse_network)]
        network: Option<Network>,
        /// Approximate betweenness from this many sampled sources.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0.85)]
        damping: f64,
    },
    /// Cross-network link counts.
    Census { dataset: PathBuf },
    /// Graphviz rendering input sized by degree and colored by network.
    ExportDot {
        dataset: PathBuf,
        /// largest or all.
        #[arg(long, default_value = "largest")]
        component: ComponentFilter,
    },
    /// Compare every metric with the published values.
    Replicate {
        dataset: PathBuf,
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Generate a synthetic two-network dataset.
    Synth {
        /// Total nodes; defaults to the published dataset's size.
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Generate keyword onion candidates and check them against a dataset.
    Probe {
        #[arg(long)]
        keyword: String,
        /// v2 or v3.
        #[arg(long, default_value = "v3", value_parser = parse_onion_kind)]
        version: AddressKind,
        #[arg(long, default_value = "prefix")]
        position: Position,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        known: Option<PathBuf>,
    },
}

fn parse_network(s: &str) -> Result<Network, String> {
    match s.to_ascii_lowercase().as_str() {
        "tor" => Ok(Network::Tor),
        "i2p" => Ok(Network::I2p),
        _ => Err(format!("unknown network '{s}'")),
    }
}

fn parse_onion_kind(s: &str) -> Result<AddressKind, String> {
    match s {
        "v2" => Ok(AddressKind::OnionV2),
        "v3" => Ok(AddressKind::OnionV3),
        _ => Err(format!("unknown onion version '{s}'")),
    }
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        // --help and --version arrive here too and go to stdout.
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return 1;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker threads: {e}");
            return 2;
        }
    };
    // Output is buffered so the command can run on a pool thread.
    let mut out_buf = Vec::new();
    let mut err_buf = Vec::new();
    let result = catch_unwind(AssertUnwindSafe(|| {
        pool.install(|| execute(&cli, &mut out_buf, &mut err_buf))
    }));
    let _ = stdout.write_all(&out_buf);
    let _ = stderr.write_all(&err_buf);
    match result {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            let (CliError::Input(msg) | CliError::Internal(msg)) = &e;
            let _ = writeln!(stderr, "error: {msg}");
            e.code()
        }
        Err(_) => {
            let _ = writeln!(stderr, "error: internal failure");
            2
        }
    }
}

fn load_graph(path: &Path, stderr: &mut dyn Write) -> Result<LinkGraph, CliError> {
    let report = load_edge_list(path, &EdgeFormat::canonical()).map_err(input)?;
    for m in &report.malformed {
        let _ = writeln!(stderr, "warning: {}:{}: {}", path.display(), m.line, m.message);
    }
    let (dataset, _) = normalize_with_rejects(&report.records);
    Ok(build_graph(&dataset))
}

fn write_out(out: &Option<PathBuf>, stdout: &mut dyn Write, doc: &Document) -> Result<(), CliError> {
    match out {
        Some(path) => doc.write_to(path).map_err(input),
        None => stdout
            .write_all(doc.to_text().as_bytes())
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}

fn single(name: &str, body: String) -> Document {
    Document {
        files: vec![(name.to_string(), body)],
    }
}

fn csv_doc(name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<Document, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let internal = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(header).map_err(internal)?;
    for r in rows {
        w.write_record(&r).map_err(internal)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(single(name, String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))?))
}

/// Rows rendered per format: JSON array of objects, Markdown table, or CSV.
fn table_doc(stem: &str, format: Format, header: &[&str], rows: Vec<Vec<String>>) -> Result<Document, CliError> {
    match format {
        Format::Csv => csv_doc(&format!("{stem}.csv"), header, rows),
        Format::Json => {
            let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .into_iter()
                .map(|r| {
                    header
                        .iter()
                        .zip(r)
                        .map(|(h, v)| (h.to_string(), serde_json::Value::String(v)))
                        .collect()
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&objects).map_err(|e| CliError::Internal(e.to_string()))?;
            s.push('\n');
            Ok(single(&format!("{stem}.json"), s))
        }
        Format::Markdown => {
            let mut s = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
            for r in rows {
                s.push_str(&format!("| {} |\n", r.join(" | ")));
            }
            Ok(single(&format!("{stem}.md"), s))
        }
    }
}

fn replication_doc(rep: &Replication, format: Format) -> Result<Document, CliError> {
    match format {
        Format::Markdown => Ok(single("replication.md", rep.to_markdown())),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rep).map_err(|e| CliError::Internal(e.to_string()))?;
            s.push('\n');
            Ok(single("replication.json", s))
        }
        Format::Csv => csv_doc(
            "replication.csv",
            &["item", "printed", "computed", "verdict"],
            rep.checks
                .iter()
                .map(|c| vec![c.item.clone(), c.printed.clone(), c.computed.clone(), c.verdict.to_string()])
                .collect(),
        ),
    }
}

fn strategy(sample: Option<usize>, seed: u64) -> BetweennessStrategy {
    match sample {
        Some(k) => BetweennessStrategy::Sampled { k, seed },
        None => BetweennessStrategy::Exact,
    }
}

fn execute(cli: &Cli, stdout: &mut Vec<u8>, stderr: &mut Vec<u8>) -> Result<(), CliError> {
    let g = &cli.global;
    let summary_opts = SummaryOptions {
        pair_semantics: g.pair_semantics,
        component_mode: g.component_mode,
    };
    let doc = match &cli.command {
        Command::Ingest { files, tsv, rejects } => {
            let format = if *tsv { EdgeFormat::tsv() } else { EdgeFormat::canonical() };
            let mut records = Vec::new();
            for f in files {
                let report = load_edge_list(f, &format).map_err(input)?;
                for m in &report.malformed {
                    let _ = writeln!(stderr, "warning: {}:{}: {}", f.display(), m.line, m.message);
                }
                records.extend(report.records);
            }
            let (dataset, rejected) = normalize_with_rejects(&records);
            let s = &dataset.stats;
            let _ = writeln!(
                stderr,
                "records={} nodes={} edges={} self_loops={} duplicates={} non_darknet={} invalid={} rejected_nodes={}",
                s.raw_records,
                dataset.node_count(),
                dataset.edge_count(),
                s.dropped_self_loops,
                s.dropped_duplicates,
                s.dropped_non_darknet,
                s.dropped_invalid,
                s.rejected_nodes
            );
            if let Some(path) = rejects {
                let file = std::fs::File::create(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
                write_rejects(&rejected, file).map_err(input)?;
            }
            let mut buf = Vec::new();
            write_dataset_to(&dataset, &mut buf).map_err(|e| CliError::Internal(e.to_string()))?;
            single("dataset.csv", String::from_utf8(buf).map_err(|e| CliError::Internal(e.to_string()))?)
        }
        Command::Extract { files } => {
            let mut texts = Vec::new();
            if files.is_empty() {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(input)?;
                texts.push(("-".to_string(), s));
            }
            for f in files {
                let s = std::fs::read_to_string(f).map_err(|e| input(format!("{}: {e}", f.display())))?;
                texts.push((f.display().to_string(), s));
            }
            let mut rows = Vec::new();
            for (name, text) in &texts {
                for (d, offset) in extract_domains(text) {
                    rows.push(vec![name.clone(), offset.to_string(), d.canonical().to_string(), d.network().to_string()]);
                }
            }
            table_doc("domains", g.format, &["source", "offset", "domain", "network"], rows)?
        }
        Command::Summary { dataset } => {
            let graph = load_graph(dataset, stderr)?;
            let summaries = Summaries {
                i2p: graph_summary(&subgraph_by_network(&graph, Network::I2p), summary_opts),
                tor: graph_summary(&subgraph_by_network(&graph, Network::Tor), summary_opts),
                combined: graph_summary(&graph, summary_opts),
            };
            emit_report(
                &Report {
                    summaries: Some(summaries),
                    ..Report::default()
                },
                g.format,
            )
        }
        Command::Rank {
            dataset,
            metric,
            k,
            network,
            sample,
            damping,
        } => {
            if *k == 0 {
                return Err(input("k must be at least 1"));
            }
            if !(*damping > 0.0 && *damping < 1.0) {
                return Err(input("damping must be strictly between 0 and 1"));
            }
            let graph = load_graph(dataset, stderr)?;
            let scores: ScoreVector = match metric {
                Metric::InDegree => degrees(&graph).0,
                Metric::OutDegree => degrees(&graph).1,
                Metric::HarmonicCloseness => harmonic_closeness(&graph, g.direction),
                Metric::Betweenness => betweenness(&graph, strategy(*sample, g.seed)),
                Metric::PageRank => pagerank(
                    &graph,
                    PageRankConfig {
                        damping: *damping,
                        ..PageRankConfig::default()
                    },
                ),
            };
            emit_report(
                &Report {
                    rankings: vec![top_k(&scores, &graph, *k, *network)],
                    ..Report::default()
                },
                g.format,
            )
        }
        Command::Census { dataset } => {
            let graph = load_graph(dataset, stderr)?;
            emit_report(
                &Report {
                    census: Some(cross_census(&graph)),
                    ..Report::default()
                },
                g.format,
            )
        }
        Command::ExportDot { dataset, component } => {
            let graph = load_graph(dataset, stderr)?;
            let dot = export_dot(
                &graph,
                &DotOptions {
                    component: *component,
                    ..DotOptions::default()
                },
            );
            single("graph.dot", dot)
        }
        Command::Replicate { dataset, sample } => {
            let graph = load_graph(dataset, stderr)?;
            let opts = ReplicateOptions {
                pair_semantics: g.pair_semantics,
                component_mode: g.component_mode,
                direction: g.direction,
                betweenness: strategy(*sample, g.seed),
                pagerank: PageRankConfig::default(),
            };
            replication_doc(&replicate(&graph, &opts), g.format)?
        }
        Command::Synth { nodes } => {
            let spec = match nodes {
                Some(n) => SynthSpec::scaled(*n, g.seed),
                None => SynthSpec::dataset_sized(g.seed),
            };
            let dataset = synth_graph(&spec).map_err(input)?;
            let mut buf = Vec::new();
            write_dataset_to(&dataset, &mut buf).map_err(|e| CliError::Internal(e.to_string()))?;
            single("dataset.csv", String::from_utf8(buf).map_err(|e| CliError::Internal(e.to_string()))?)
        }
        Command::Probe {
            keyword,
            version,
            position,
            count,
            known,
        } => {
            let spec = CandidateSpec {
                keyword: keyword.clone(),
                kind: *version,
                position: *position,
                count: *count,
                seed: g.seed,
            };
            let batch = generate_candidates(&spec).map_err(input)?;
            if batch.exhausted {
                let _ = writeln!(
                    stderr,
                    "warning: only {} distinct candidates exist for this keyword",
                    batch.domains.len()
                );
            }
            let hits = match known {
                Some(path) => {
                    let report = load_edge_list(path, &EdgeFormat::canonical()).map_err(input)?;
                    let (dataset, _) = normalize_with_rejects(&report.records);
                    check_membership(&batch.domains, &dataset)
                }
                None => Vec::new(),
            };
            let rows = batch
                .domains
                .iter()
                .map(|d| vec![d.canonical().to_string(), hits.contains(d).to_string()])
                .collect();
            table_doc("candidates", g.format, &["domain", "known"], rows)?
        }
    };
    write_out(&g.output, stdout, &doc)
}
