//! Graphviz export of the link graph.

use std::fmt::Write;
use std::str::FromStr;

use crate::graph::LinkGraph;
use crate::ingest::Network;
use crate::metrics::{connected_components, ComponentMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComponentFilter {
    /// Only the largest weakly connected component.
    #[default]
    Largest,
    All,
}

impl FromStr for ComponentFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "largest" => Ok(ComponentFilter::Largest),
            "all" => Ok(ComponentFilter::All),
            _ => Err(format!("unknown component filter '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotOptions {
    pub component: ComponentFilter,
    /// Width given to the highest-degree node; others scale linearly.
    pub max_width: f64,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions {
            component: ComponentFilter::Largest,
            max_width: 4.0,
        }
    }
}

pub fn network_class(net: Network) -> &'static str {
    match net {
        Network::Tor => "tor",
        Network::I2p => "i2p",
    }
}

fn fill(net: Network) -> &'static str {
    match net {
        Network::Tor => "#7e57c2",
        Network::I2p => "#ef6c00",
    }
}

/// DOT digraph with node width proportional to in-degree + out-degree and
/// one fill class per network.
pub fn export_dot(g: &LinkGraph, options: &DotOptions) -> String {
    let n = g.node_count();
    let keep: Vec<bool> = match options.component {
        ComponentFilter::All => vec![true; n],
        ComponentFilter::Largest => {
            let c = connected_components(g, ComponentMode::Weak);
            match c.largest() {
                Some(l) => c.labels.iter().map(|&x| x == l).collect(),
                None => vec![],
            }
        }
    };
    let degree = |v: usize| g.in_degree(v) + g.out_degree(v);
    let max_degree = (0..n).filter(|&v| keep[v]).map(degree).max().unwrap_or(0).max(1);

    let mut out = String::from("digraph darknet {\n");
    out.push_str("  node [shape=circle, style=filled, fixedsize=true, label=\"\"];\n");
    for v in (0..n).filter(|&v| keep[v]) {
        let net = g.labels()[v];
        let width = options.max_width * degree(v) as f64 / max_degree as f64;
        writeln!(
            out,
            "  \"{}\" [class=\"{}\", fillcolor=\"{}\", width={:.4}, degree={}];",
            g.domains()[v].canonical(),
            network_class(net),
            fill(net),
            width,
            degree(v)
        )
        .expect("writing to a String");
    }
    for (u, v) in g.edges().filter(|&(u, v)| keep[u] && keep[v]) {
        writeln!(
            out,
            "  \"{}\" -> \"{}\";",
            g.domains()[u].canonical(),
            g.domains()[v].canonical()
        )
        .expect("writing to a String");
    }
    out.push_str("}\n");
    out
}
