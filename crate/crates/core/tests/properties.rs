//! Property tests for graph, metric and report invariants on random digraphs.

use darknet_graph::graph::{build_graph, degrees, subgraph_by_network, LinkGraph};
use darknet_graph::ingest::Network;
use darknet_graph::metrics::{
    betweenness, connected_components, graph_summary, harmonic_closeness, pagerank,
    BetweennessStrategy, ComponentMode, Direction, PageRankConfig, SummaryOptions,
};
use darknet_graph::probegen::labeled_graph_from_edges;
use darknet_graph::report::{
    cross_census, emit_report, from_json, to_json, top_k, Format, Report, Summaries,
};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = LinkGraph> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec((0..n, 0..n), 0..n * 3),
        )
            .prop_map(|(tor, edges)| {
                let labels: Vec<Network> =
                    tor.into_iter().map(|t| if t { Network::Tor } else { Network::I2p }).collect();
                let edges: Vec<(usize, usize)> = edges.into_iter().filter(|(u, v)| u != v).collect();
                labeled_graph_from_edges(&labels, &edges)
            })
    })
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_sums_equal_edge_count(g in arb_graph(40)) {
        let (ins, outs) = degrees(&g);
        let m = g.edge_count() as f64;
        prop_assert_eq!(ins.values.iter().sum::<f64>(), m);
        prop_assert_eq!(outs.values.iter().sum::<f64>(), m);
    }

    #[test]
    fn rebuild_keeps_ids(g in arb_graph(40)) {
        let again = build_graph(&g.to_dataset());
        prop_assert_eq!(again.domains(), g.domains());
        prop_assert_eq!(again.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn census_identity(g in arb_graph(40)) {
        let c = cross_census(&g);
        let tor = subgraph_by_network(&g, Network::Tor).edge_count();
        let i2p = subgraph_by_network(&g, Network::I2p).edge_count();
        prop_assert_eq!(tor + i2p + c.cross_edges(), g.edge_count());
        prop_assert!(c.tor_domains_linked_from_i2p <= c.i2p_to_tor_edges);
        prop_assert!(c.i2p_domains_linked_from_tor <= c.tor_to_i2p_edges);
        prop_assert!(c.i2p_domains_linking_tor <= c.i2p_to_tor_edges);
        prop_assert!(c.tor_domains_linking_i2p <= c.tor_to_i2p_edges);
    }

    #[test]
    fn pagerank_sums_to_one_with_floor(g in arb_graph(40), damping in 0.5f64..0.95) {
        let pr = pagerank(&g, PageRankConfig { damping, ..PageRankConfig::default() });
        let n = g.node_count() as f64;
        prop_assert!((pr.values.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        for &p in &pr.values {
            prop_assert!(p >= (1.0 - damping) / n - 1e-12);
        }
    }

    #[test]
    fn betweenness_zero_at_sources_and_sinks(g in arb_graph(40)) {
        let b = betweenness(&g, BetweennessStrategy::Exact);
        for v in 0..g.node_count() {
            prop_assert!(b.values[v] >= 0.0);
            if g.in_degree(v) == 0 || g.out_degree(v) == 0 {
                prop_assert_eq!(b.values[v], 0.0);
            }
        }
    }

    #[test]
    fn metrics_independent_of_thread_count(g in arb_graph(120)) {
        let run = || {
            (
                betweenness(&g, BetweennessStrategy::Exact).values,
                betweenness(&g, BetweennessStrategy::Sampled { k: 10, seed: 7 }).values,
                harmonic_closeness(&g, Direction::Out).values,
                pagerank(&g, PageRankConfig::default()).values,
                graph_summary(&g, SummaryOptions::default()),
            )
        };
        let one = in_pool(1, run);
        let three = in_pool(3, run);
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&one.0), bits(&three.0));
        prop_assert_eq!(bits(&one.1), bits(&three.1));
        prop_assert_eq!(bits(&one.2), bits(&three.2));
        prop_assert_eq!(bits(&one.3), bits(&three.3));
        prop_assert_eq!(one.4, three.4);
    }

    #[test]
    fn closeness_bounded_and_monotone(g in arb_graph(25), u in 0usize..25, v in 0usize..25) {
        let before = harmonic_closeness(&g, Direction::Out);
        for &c in &before.values {
            prop_assert!((0.0..=1.0).contains(&c));
        }
        let n = g.node_count();
        let (u, v) = (u % n, v % n);
        prop_assume!(u != v);
        let mut edges: Vec<(usize, usize)> = g.edges().collect();
        edges.push((u, v));
        let added = labeled_graph_from_edges(g.labels(), &edges);
        let after = harmonic_closeness(&added, Direction::Out);
        for (b, a) in before.values.iter().zip(&after.values) {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn weak_components_never_exceed_strong(g in arb_graph(40)) {
        let weak = connected_components(&g, ComponentMode::Weak).count;
        let strong = connected_components(&g, ComponentMode::Strong).count;
        prop_assert!(weak <= strong);
        prop_assert!(weak >= 1 && strong <= g.node_count());
    }

    #[test]
    fn summary_invariants(g in arb_graph(40)) {
        let s = graph_summary(&g, SummaryOptions::default());
        prop_assert!((0.0..=1.0).contains(&s.density));
        if s.reachable_pairs > 0 {
            prop_assert!(f64::from(s.diameter) >= s.avg_path_length);
        }
    }

    #[test]
    fn rankings_ordered_and_contiguous(g in arb_graph(40), k in 0usize..50) {
        let pr = pagerank(&g, PageRankConfig::default());
        let r = top_k(&pr, &g, k, None);
        prop_assert_eq!(r.entries.len(), k.min(g.node_count()));
        for (i, e) in r.entries.iter().enumerate() {
            prop_assert_eq!(e.rank, i + 1);
        }
        for w in r.entries.windows(2) {
            prop_assert!(w[0].value >= w[1].value);
            if w[0].value == w[1].value {
                prop_assert!(w[0].domain < w[1].domain);
            }
        }
    }

    #[test]
    fn json_report_is_a_fixed_point(g in arb_graph(30)) {
        let summary = graph_summary(&g, SummaryOptions::default());
        let pr = pagerank(&g, PageRankConfig::default());
        let report = Report {
            summaries: Some(Summaries {
                i2p: graph_summary(&subgraph_by_network(&g, Network::I2p), SummaryOptions::default()),
                tor: graph_summary(&subgraph_by_network(&g, Network::Tor), SummaryOptions::default()),
                combined: summary,
            }),
            census: Some(cross_census(&g)),
            rankings: vec![top_k(&pr, &g, 5, None)],
        };
        let text = to_json(&report);
        let parsed = from_json(&text).unwrap();
        prop_assert_eq!(&parsed, &report);
        prop_assert_eq!(to_json(&parsed), text);
        prop_assert_eq!(
            emit_report(&parsed, Format::Markdown).to_text(),
            emit_report(&report, Format::Markdown).to_text()
        );
    }
}
