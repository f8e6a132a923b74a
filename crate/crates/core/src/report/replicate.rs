//! Comparison of computed results against the values printed for the
//! published Tor + i2p dataset.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::census::{cross_census, CrossCensus, TOR_ONION_POPULATION};
use super::emit::{density_cell, fixed3};
use super::ranking::{domain_matches, order_nodes};
use crate::graph::{degrees, subgraph_by_network, LinkGraph};
use crate::ingest::Network;
use crate::metrics::{
    betweenness, connected_components, graph_summary, harmonic_closeness, pagerank,
    BetweennessStrategy, ComponentMode, Direction, GraphMetrics, Metric, PageRankConfig,
    PairSemantics, ScoreVector, SummaryOptions,
};

/// Printed network metrics, one string per cell as it appears in print.
pub struct PrintedColumn {
    pub network: &'static str,
    pub nodes: &'static str,
    pub edges: &'static str,
    pub avg_degree: &'static str,
    pub density: &'static str,
    pub avg_path_length: &'static str,
    pub diameter: &'static str,
    pub components: &'static str,
}

pub const PRINTED_METRICS: [PrintedColumn; 3] = [
    PrintedColumn {
        network: "i2p",
        nodes: "2687",
        edges: "13857",
        avg_degree: "5.517",
        density: "0.002",
        avg_path_length: "2.769",
        diameter: "8",
        components: "11",
    },
    PrintedColumn {
        network: "Tor",
        nodes: "46562",
        edges: "282270",
        avg_degree: "6.062",
        density: "<0.001",
        avg_path_length: "4.356",
        diameter: "11",
        components: "616",
    },
    PrintedColumn {
        network: "i2p + Tor",
        nodes: "49249",
        edges: "304673",
        avg_degree: "6.186",
        density: "<0.001",
        avg_path_length: "4.412",
        diameter: "12",
        components: "328",
    },
];

pub const PRINTED_I2P_TO_TOR: usize = 487;
pub const PRINTED_TOR_TO_I2P: usize = 8148;
pub const PRINTED_TOR_COVERAGE_PCT: &str = "61";

/// One printed ranking row. Domains may be elided with `...` or `\u{2026}`.
pub struct PrintedRow {
    pub metric: Metric,
    pub rank: usize,
    pub domain: &'static str,
    pub network: Network,
    pub value: &'static str,
}

const fn row(metric: Metric, rank: usize, domain: &'static str, network: Network, value: &'static str) -> PrintedRow {
    PrintedRow {
        metric,
        rank,
        domain,
        network,
        value,
    }
}

use Metric::{Betweenness as Btw, HarmonicCloseness as Clo, InDegree as In, OutDegree as Out, PageRank as Pr};
use Network::{I2p, Tor};

pub const PRINTED_ROWS: &[PrintedRow] = &[
    row(In, 1, "pejjyyh7rhv5ctyu.onion", Tor, "22315"),
    row(In, 2, "zlal32teyptf4tvi.onion", Tor, "16373"),
    row(In, 3, "onionsnjajzkhm5g.onion", Tor, "10095"),
    row(In, 4, "44llcbgyt22pwvyq.onion", Tor, "6192"),
    row(In, 5, "cratedvnn5z57xhl.onion", Tor, "5332"),
    row(In, 12, "rv6zugykqdhmwwsuglv7j6...b32.i2p", I2p, "3304"),
    row(In, 13, "andmp.i2p", I2p, "3211"),
    row(Out, 1, "proxy.i2p", I2p, "1793"),
    row(Out, 2, "stats.i2p", I2p, "1205"),
    row(Out, 3, "no.i2p", I2p, "1185"),
    row(Out, 4, "i2pjump.i2p", I2p, "1177"),
    row(Out, 5, "dhosting4xxoydyaiv...syd.onion", Tor, "535"),
    row(Out, 6, "Torbox3uiot6wchz.onion", Tor, "337"),
    row(Clo, 1, "pejjyyh7rhv5ctyu.onion", Tor, "0.706"),
    row(Clo, 2, "zlal32teyptf4tvi.onion", Tor, "0.642"),
    row(Clo, 3, "onionsnjajzkhm5g.onion", Tor, "0.580"),
    row(Clo, 4, "44llcbgyt22pwvyq.onion", Tor, "0.559"),
    row(Clo, 5, "underdj5ziov3ic7.onion", Tor, "0.513"),
    row(Clo, 27, "andmp.i2p", I2p, "0.470"),
    row(Btw, 1, "i2pjump.i2p", I2p, "43755077"),
    row(Btw, 2, "zlal32teyptf4tvi.onion", Tor, "41176352"),
    row(Btw, 3, "dhosting4xxoydyaiv...syd.onion", Tor, "32290935"),
    row(Btw, 4, "pejjyyh7rhv5ctyu.onion", Tor, "28768547"),
    row(Btw, 5, "onionsnjajzkhm5g.onion", Tor, "27588772"),
    row(Btw, 6, "hiddenanswers.i2p", I2p, "24853420"),
    row(Pr, 1, "dhosting4xxoydyaiv...syd.onion", Tor, "3492"),
    row(Pr, 2, "pejjyyh7rhv5ctyu.onion", Tor, "2897"),
    row(Pr, 3, "zlal32teyptf4tvi\u{2026}syd.onion", Tor, "1478"),
    row(Pr, 4, "onionsnjajzkhm5g.onion", Tor, "1129"),
    row(Pr, 5, "donionsixbjtiohce2...ead.onion", Tor, "1077"),
    row(Pr, 10, "identiguy.i2p", I2p, "778"),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Matches,
    MatchesUnder { convention: String },
    Deviates { note: String },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Matches => f.write_str("matches paper"),
            Verdict::MatchesUnder { convention } => {
                write!(f, "matches under alternate convention ({convention})")
            }
            Verdict::Deviates { note } => write!(f, "deviates ({note})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub item: String,
    pub printed: String,
    pub computed: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Replication {
    pub checks: Vec<Check>,
}

impl Replication {
    pub fn find(&self, item: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.item == item)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("## Replication\n\n| Item | Printed | Computed | Verdict |\n|---|---:|---:|---|\n");
        for c in &self.checks {
            out.push_str(&format!("| {} | {} | {} | {} |\n", c.item, c.printed, c.computed, c.verdict));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicateOptions {
    pub pair_semantics: PairSemantics,
    pub component_mode: ComponentMode,
    pub direction: Direction,
    pub betweenness: BetweennessStrategy,
    pub pagerank: PageRankConfig,
}

impl Default for ReplicateOptions {
    fn default() -> Self {
        ReplicateOptions {
            pair_semantics: PairSemantics::default(),
            component_mode: ComponentMode::default(),
            direction: Direction::default(),
            betweenness: BetweennessStrategy::Exact,
            pagerank: PageRankConfig::default(),
        }
    }
}

/// True when both strings hold the same characters in a different order,
/// as happens when two printed digits are swapped.
pub fn is_transposition(printed: &str, computed: &str) -> bool {
    let mut a: Vec<char> = printed.chars().collect();
    let mut b: Vec<char> = computed.chars().collect();
    if a == b {
        return false;
    }
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

/// Verdict for a printed cell given the computed cell under the primary
/// convention and under named alternatives.
pub fn judge(printed: &str, primary: &str, alternates: &[(String, String)]) -> Verdict {
    if printed == primary {
        return Verdict::Matches;
    }
    if let Some((name, _)) = alternates.iter().find(|(_, v)| v == printed) {
        return Verdict::MatchesUnder {
            convention: name.clone(),
        };
    }
    if is_transposition(printed, primary) {
        return Verdict::Deviates {
            note: format!("suspected erratum: printed {printed} transposes the digits of {primary}"),
        };
    }
    Verdict::Deviates {
        note: "value differs".to_string(),
    }
}

fn check(item: String, printed: &str, primary: String, alternates: Vec<(String, String)>) -> Check {
    Check {
        verdict: judge(printed, &primary, &alternates),
        item,
        printed: printed.to_string(),
        computed: primary,
    }
}

struct ColumnResults {
    primary: GraphMetrics,
    alt_paths: GraphMetrics,
    alt_components: usize,
}

fn table_checks(out: &mut Vec<Check>, printed: &PrintedColumn, r: &ColumnResults, opts: &ReplicateOptions) {
    let p = &r.primary;
    let net = printed.network;
    let alt_sem = match opts.pair_semantics {
        PairSemantics::Directed => PairSemantics::Undirected,
        PairSemantics::Undirected => PairSemantics::Directed,
    };
    let alt_mode = match opts.component_mode {
        ComponentMode::Weak => ComponentMode::Strong,
        ComponentMode::Strong => ComponentMode::Weak,
    };
    out.push(check(format!("{net} nodes"), printed.nodes, p.nodes.to_string(), vec![]));
    out.push(check(format!("{net} edges"), printed.edges, p.edges.to_string(), vec![]));
    let total_degree = if p.nodes > 0 { 2.0 * p.edges as f64 / p.nodes as f64 } else { 0.0 };
    out.push(check(
        format!("{net} avg. degree"),
        printed.avg_degree,
        fixed3(p.avg_degree),
        vec![("in+out degree 2m/n".into(), fixed3(total_degree))],
    ));
    out.push(check(format!("{net} density"), printed.density, density_cell(p.density), vec![]));
    out.push(check(
        format!("{net} avg. path length"),
        printed.avg_path_length,
        fixed3(p.avg_path_length),
        vec![(format!("{alt_sem} pairs"), fixed3(r.alt_paths.avg_path_length))],
    ));
    out.push(check(
        format!("{net} diameter"),
        printed.diameter,
        p.diameter.to_string(),
        vec![(format!("{alt_sem} pairs"), r.alt_paths.diameter.to_string())],
    ));
    out.push(check(
        format!("{net} connected components"),
        printed.components,
        p.connected_components.to_string(),
        vec![(format!("{alt_mode} components"), r.alt_components.to_string())],
    ));
}

/// The printed per-network edge counts plus both cross-link counts should
/// add up to the printed combined edge count.
fn printed_edge_identity() -> Check {
    let parts: usize = PRINTED_METRICS[..2]
        .iter()
        .map(|c| c.edges.parse::<usize>().expect("printed counts are integers"))
        .sum::<usize>()
        + PRINTED_I2P_TO_TOR
        + PRINTED_TOR_TO_I2P;
    let mut c = check(
        "printed i2p + Tor + cross-link edges".into(),
        PRINTED_METRICS[2].edges,
        parts.to_string(),
        vec![],
    );
    if c.printed != c.computed {
        c.verdict = Verdict::Deviates {
            note: "printed counts are mutually inconsistent".into(),
        };
    }
    c
}

fn census_checks(out: &mut Vec<Check>, c: &CrossCensus) {
    out.push(printed_edge_identity());
    out.push(check(
        "i2p -> Tor links".into(),
        &PRINTED_I2P_TO_TOR.to_string(),
        c.i2p_to_tor_edges.to_string(),
        vec![("distinct Tor domains linked from i2p".into(), c.tor_domains_linked_from_i2p.to_string())],
    ));
    out.push(check(
        "Tor -> i2p links".into(),
        &PRINTED_TOR_TO_I2P.to_string(),
        c.tor_to_i2p_edges.to_string(),
        vec![("distinct i2p domains linked from Tor".into(), c.i2p_domains_linked_from_tor.to_string())],
    ));
    let pct = |nodes: usize| format!("{:.0}", 100.0 * nodes as f64 / TOR_ONION_POPULATION as f64);
    out.push(check(
        "Tor coverage of 75k onion services (%)".into(),
        PRINTED_TOR_COVERAGE_PCT,
        pct(c.tor_nodes),
        vec![("node count truncated to thousands".into(), pct(c.tor_nodes / 1000 * 1000))],
    ));
}

/// Score vectors a ranking row may be compared against: the primary one
/// first, then named alternatives.
struct RankSource<'a> {
    metric: Metric,
    variants: Vec<(String, &'a ScoreVector)>,
}

fn format_printed_like(printed: &str, value: f64) -> String {
    match printed.split_once('.') {
        Some((_, frac)) => format!("{value:.*}", frac.len()),
        None => format!("{value:.0}"),
    }
}

fn rank_checks(out: &mut Vec<Check>, g: &LinkGraph, sources: &[RankSource]) {
    for src in sources {
        let orders: Vec<(String, &ScoreVector, Vec<usize>)> = src
            .variants
            .iter()
            .map(|(name, s)| (name.clone(), *s, order_nodes(s, g)))
            .collect();
        for row in PRINTED_ROWS.iter().filter(|r| r.metric == src.metric) {
            let item = format!("{} rank {} {}", src.metric.slug(), row.rank, row.domain);
            let printed = format!("#{} {}", row.rank, row.value);
            let locate = |pattern: &str| {
                orders[0]
                    .2
                    .iter()
                    .position(|&v| domain_matches(pattern, g.domains()[v].canonical()))
            };
            let elided = row.domain.contains("...") || row.domain.contains('\u{2026}');
            let found = locate(row.domain).map(|pos| (pos, true)).or_else(|| {
                // Elided names whose tail does not fit: retry on the leading part.
                let head = row.domain.split(['.', '\u{2026}']).next().unwrap_or_default();
                (elided && !head.is_empty())
                    .then(|| locate(&format!("{head}...")))
                    .flatten()
                    .map(|pos| (pos, false))
            });
            let (_, primary_scores, primary_order) = &orders[0];
            let Some((pos, exact_name)) = found else {
                out.push(Check {
                    item,
                    printed,
                    computed: "absent".into(),
                    verdict: Verdict::Deviates {
                        note: "domain not in dataset".into(),
                    },
                });
                continue;
            };
            let v = primary_order[pos];
            let value = format_printed_like(row.value, primary_scores.values[v]);
            let computed = format!("#{} {}", pos + 1, value);
            let name_note = if !exact_name {
                Some(format!(
                    "suspected erratum: printed name does not fit {}",
                    g.domains()[v].canonical()
                ))
            } else {
                None
            };
            let verdict = rank_verdict(src.metric, row, pos + 1, &value, &orders, g, name_note);
            out.push(Check {
                item,
                printed,
                computed,
                verdict,
            });
        }
    }
}

fn rank_verdict(
    metric: Metric,
    row: &PrintedRow,
    rank: usize,
    value: &str,
    orders: &[(String, &ScoreVector, Vec<usize>)],
    g: &LinkGraph,
    name_note: Option<String>,
) -> Verdict {
    if let Some(note) = name_note {
        return Verdict::Deviates { note };
    }
    let value_only = matches!(metric, Metric::PageRank);
    let magnitude_free = matches!(metric, Metric::HarmonicCloseness | Metric::Betweenness);
    if rank == row.rank && (value == row.value || value_only) {
        return if value_only {
            Verdict::MatchesUnder {
                convention: "rank order only; printed scale unstated".into(),
            }
        } else {
            Verdict::Matches
        };
    }
    for (name, scores, order) in &orders[1..] {
        if let Some(pos) = order
            .iter()
            .position(|&v| domain_matches(row.domain, g.domains()[v].canonical()))
        {
            let alt_value = format_printed_like(row.value, scores.values[order[pos]]);
            if pos + 1 == row.rank && (alt_value == row.value || value_only) {
                return Verdict::MatchesUnder {
                    convention: name.clone(),
                };
            }
        }
    }
    if rank == row.rank && magnitude_free {
        return Verdict::MatchesUnder {
            convention: "rank order only; magnitude is convention-dependent".into(),
        };
    }
    if rank == row.rank {
        return Verdict::Deviates {
            note: "value differs".into(),
        };
    }
    Verdict::Deviates {
        note: format!("computed rank {rank}"),
    }
}

/// Runs every metric on `g` and compares against the printed values.
pub fn replicate(g: &LinkGraph, opts: &ReplicateOptions) -> Replication {
    let mut checks = Vec::new();
    let alt_sem = match opts.pair_semantics {
        PairSemantics::Directed => PairSemantics::Undirected,
        PairSemantics::Undirected => PairSemantics::Directed,
    };
    let alt_mode = match opts.component_mode {
        ComponentMode::Weak => ComponentMode::Strong,
        ComponentMode::Strong => ComponentMode::Weak,
    };
    let i2p = subgraph_by_network(g, Network::I2p);
    let tor = subgraph_by_network(g, Network::Tor);
    for (printed, graph) in PRINTED_METRICS.iter().zip([&i2p, &tor, g]) {
        let primary = graph_summary(
            graph,
            SummaryOptions {
                pair_semantics: opts.pair_semantics,
                component_mode: opts.component_mode,
            },
        );
        let alt_paths = graph_summary(
            graph,
            SummaryOptions {
                pair_semantics: alt_sem,
                component_mode: opts.component_mode,
            },
        );
        let alt_components = connected_components(graph, alt_mode).count;
        let results = ColumnResults {
            primary,
            alt_paths,
            alt_components,
        };
        table_checks(&mut checks, printed, &results, opts);
    }
    census_checks(&mut checks, &cross_census(g));

    let (in_deg, out_deg) = degrees(g);
    let closeness: Vec<(Direction, ScoreVector)> = std::iter::once(opts.direction)
        .chain(Direction::ALL.into_iter().filter(|&d| d != opts.direction))
        .map(|d| (d, harmonic_closeness(g, d)))
        .collect();
    let btw = betweenness(g, opts.betweenness);
    let pr = pagerank(g, opts.pagerank);
    let sources = vec![
        RankSource {
            metric: Metric::InDegree,
            variants: vec![("in-degree".into(), &in_deg)],
        },
        RankSource {
            metric: Metric::OutDegree,
            variants: vec![("out-degree".into(), &out_deg)],
        },
        RankSource {
            metric: Metric::HarmonicCloseness,
            variants: closeness
                .iter()
                .map(|(d, s)| (format!("{d} distances"), s))
                .collect(),
        },
        RankSource {
            metric: Metric::Betweenness,
            variants: vec![("betweenness".into(), &btw)],
        },
        RankSource {
            metric: Metric::PageRank,
            variants: vec![("pagerank".into(), &pr)],
        },
    ];
    rank_checks(&mut checks, g, &sources);
    Replication { checks }
}
