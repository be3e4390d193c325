//! Small reference networks bundled with the crate.

use crate::io::{read_edge_list, read_partition};
use crate::{Graph, Partition, PlantedNetwork};

const KARATE_EDGES: &str = include_str!("../data/karate.edges");
const KARATE_TRUTH: &str = include_str!("../data/karate.truth");

/// Zachary's karate club: 34 nodes, 78 edges, and the two factions the club
/// split into. Node ids are the usual 0-based member numbers.
pub fn karate() -> PlantedNetwork {
    let lg = read_edge_list(KARATE_EDGES.as_bytes()).expect("bundled edge list parses");
    let truth = read_partition(KARATE_TRUTH.as_bytes(), &lg.labels).expect("bundled truth parses");
    let member = |id: usize| -> usize { lg.labels.name(id).parse().expect("numeric labels") };
    let edges = lg.graph.edges().map(|(u, v, _)| (member(u), member(v)));
    let graph = Graph::from_edges(34, edges).expect("valid edges");
    let mut labels = vec![0; 34];
    for id in 0..34 {
        labels[member(id)] = truth.community_of(id);
    }
    PlantedNetwork {
        graph,
        truth: Partition::from_labels(&labels),
    }
}
