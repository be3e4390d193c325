//! Asynchronous label propagation.
//!
//! Every node starts with its own label. Sweeps visit nodes in a seeded
//! random order and each node adopts the label carrying the most edge weight
//! among its neighbors, breaking ties uniformly at random. The run stops once
//! every node holds one of its neighborhood's majority labels, or after the
//! sweep cap, in which case the current labeling is returned.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::{rng, Graph, Partition};

pub const DEFAULT_MAX_SWEEPS: usize = 100;

const TIE_EPS: f64 = 1e-12;

pub fn label_propagation(g: &Graph, seed: u64) -> Partition {
    label_propagation_with_cap(g, seed, DEFAULT_MAX_SWEEPS)
}

pub fn label_propagation_with_cap(g: &Graph, seed: u64, max_sweeps: usize) -> Partition {
    let n = g.node_count();
    let mut rng = rng::seeded(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut counts = vec![0.0; n];
    let mut touched = Vec::new();
    let mut best = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();

    for _ in 0..max_sweeps {
        order.shuffle(&mut rng);
        for &v in &order {
            if g.degree(v) == 0 {
                continue;
            }
            majority_labels(g, v, &labels, &mut counts, &mut touched, &mut best);
            labels[v] = if best.len() == 1 {
                best[0]
            } else {
                best[rng.random_range(0..best.len())]
            };
        }
        let converged = (0..n).all(|v| {
            g.degree(v) == 0 || {
                majority_labels(g, v, &labels, &mut counts, &mut touched, &mut best);
                best.contains(&labels[v])
            }
        });
        if converged {
            break;
        }
    }
    Partition::from_labels(&labels)
}

/// Fills `best` with the ascending list of labels of maximal neighbor weight.
fn majority_labels(
    g: &Graph,
    v: usize,
    labels: &[usize],
    counts: &mut [f64],
    touched: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    for &(u, w) in g.adjacency(v) {
        let l = labels[u];
        if counts[l] == 0.0 {
            touched.push(l);
        }
        counts[l] += w;
    }
    touched.sort_unstable();
    let top = touched.iter().map(|&l| counts[l]).fold(f64::MIN, f64::max);
    best.clear();
    best.extend(touched.iter().copied().filter(|&l| counts[l] >= top - TIE_EPS));
    for &l in touched.iter() {
        counts[l] = 0.0;
    }
    touched.clear();
}
