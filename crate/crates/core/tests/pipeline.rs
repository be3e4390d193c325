use std::sync::Arc;

use edgeboost::benchgen::generate_incomplete;
use edgeboost::community::detect;
use edgeboost::io::{read_edge_list, read_partition, write_edge_list, write_partition, NodeLabels};
use edgeboost::metrics::nmi;
use edgeboost::{boost, BenchmarkSpec, BoostConfig, DetectorKind, ExternalDetector, PredictorKind};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn boost_is_independent_of_thread_count() {
    let net = generate_incomplete(
        &BenchmarkSpec::default()
            .with_nodes(300)
            .with_mu(0.3)
            .with_delta(0.3)
            .with_seed(8),
    )
    .unwrap();
    for det in [DetectorKind::Louvain, DetectorKind::LabelPropagation] {
        let cfg = BoostConfig::new(det)
            .with_iterations(12)
            .with_seed(21)
            .with_predictor(PredictorKind::AdamicAdar);
        let one = in_pool(1, || boost::run(&net.graph, &cfg).unwrap());
        let four = in_pool(4, || boost::run(&net.graph, &cfg).unwrap());
        assert_eq!(one, four);
    }
}

#[test]
fn boost_improves_a_damaged_benchmark() {
    let net = generate_incomplete(&BenchmarkSpec::default().with_mu(0.2).with_delta(0.3).with_seed(5)).unwrap();
    let base = detect(&net.graph, DetectorKind::Louvain, 5);
    let out = boost::run(&net.graph, &BoostConfig::new(DetectorKind::Louvain).with_iterations(20).with_seed(5)).unwrap();
    let before = nmi(&base, &net.truth).unwrap();
    let after = nmi(out.partition(), &net.truth).unwrap();
    assert!(after > before, "{after} <= {before}");
    assert!(out.consensus.tau > 0.0 && out.consensus.tau <= 1.0);
    assert_eq!(out.consensus.per_tau.len(), 20);
    assert_eq!(out.ensemble.len(), 20);
}

#[test]
fn files_round_trip_a_benchmark() {
    let net = generate_incomplete(&BenchmarkSpec::default().with_nodes(400).with_mu(0.2).with_delta(0.4).with_seed(2)).unwrap();
    let labels = NodeLabels::identity(400);
    let mut edges = Vec::new();
    write_edge_list(&mut edges, &net.graph, &labels).unwrap();
    let mut truth = Vec::new();
    write_partition(&mut truth, &net.truth, &labels).unwrap();

    let lg = read_edge_list(edges.as_slice()).unwrap();
    assert_eq!(lg.graph.node_count(), 400);
    assert_eq!(lg.graph.edge_count(), net.graph.edge_count());
    let back = read_partition(truth.as_slice(), &lg.labels).unwrap();
    for (u, v, _) in net.graph.edges() {
        let (a, b) = (lg.labels.id(&u.to_string()).unwrap(), lg.labels.id(&v.to_string()).unwrap());
        assert!(lg.graph.has_edge(a, b));
        assert_eq!(back.same_community(a, b), net.truth.same_community(u, v));
    }
    assert_eq!(back.community_count(), net.truth.community_count());
}

#[test]
fn external_detector_plugs_into_boost() {
    // one community per parity class of the node id
    let script = r#"{ for (i = 1; i <= NF; i++) seen[$i] = 1 } END { for (v in seen) print v "\t" v % 2 }"#;
    let det = ExternalDetector::new("awk", vec![script.to_owned()]);
    let g = edgeboost::Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
    let cfg = BoostConfig::with_detector(Arc::new(det)).with_iterations(3);
    let out = boost::run(&g, &cfg).unwrap();
    assert_eq!(out.partition().labels(), &[0, 1, 0, 1, 0, 1]);
}
