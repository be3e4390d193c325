//! Louvain modularity optimization.
//!
//! Greedy local moves followed by aggregation of communities into
//! super-nodes, repeated until a level produces no move. Node visit order is
//! a seeded shuffle per sweep; among equally good target communities the one
//! with the lowest id wins, and a node only leaves its community for a
//! strictly better one.
//!
//! After the hierarchy converges, a final local-move phase runs on the
//! original nodes starting from the flattened partition. Its result cannot
//! be improved by moving any single node to another (or a fresh) community.
//! If that phase moves anything, the hierarchy is rebuilt from its result.

use rand::seq::SliceRandom;

use crate::{rng, Graph, Partition};

const GAIN_EPS: f64 = 1e-10;
const MAX_ROUNDS: usize = 32;

/// Weighted graph with self-loops, one per aggregation level.
#[derive(Debug, Clone)]
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    /// Strength including twice the self-loop weight.
    strength: Vec<f64>,
    /// Total edge weight, self-loops counted once.
    total: f64,
}

impl Level {
    fn from_graph(g: &Graph) -> Self {
        let adj: Vec<Vec<(usize, f64)>> = (0..g.node_count())
            .map(|u| g.adjacency(u).to_vec())
            .collect();
        let strength = adj
            .iter()
            .map(|l| l.iter().map(|&(_, w)| w).sum())
            .collect();
        Self {
            adj,
            self_loops: vec![0.0; g.node_count()],
            strength,
            total: g.total_weight(),
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Collapses each community (labels contiguous from 0) into one node.
    fn aggregate(&self, labels: &[usize], n_comms: usize) -> Level {
        let mut members = vec![Vec::new(); n_comms];
        for (v, &c) in labels.iter().enumerate() {
            members[c].push(v);
        }
        let mut acc = vec![0.0; n_comms];
        let mut touched = Vec::new();
        let mut adj = Vec::with_capacity(n_comms);
        let mut self_loops = vec![0.0; n_comms];
        for (c, nodes) in members.iter().enumerate() {
            for &v in nodes {
                self_loops[c] += self.self_loops[v];
                for &(u, w) in &self.adj[v] {
                    let cu = labels[u];
                    if cu == c {
                        // each internal edge is seen from both endpoints
                        self_loops[c] += w / 2.0;
                    } else {
                        if acc[cu] == 0.0 {
                            touched.push(cu);
                        }
                        acc[cu] += w;
                    }
                }
            }
            touched.sort_unstable();
            adj.push(touched.iter().map(|&d| (d, acc[d])).collect::<Vec<_>>());
            for &d in &touched {
                acc[d] = 0.0;
            }
            touched.clear();
        }
        let strength = (0..n_comms)
            .map(|c| 2.0 * self_loops[c] + adj[c].iter().map(|&(_, w)| w).sum::<f64>())
            .collect();
        Level {
            adj,
            self_loops,
            strength,
            total: self.total,
        }
    }

    /// Repeated sweeps of single-node moves starting from `labels` (any ids
    /// below `len()`), until a sweep moves nothing. Returns whether any node
    /// moved.
    fn local_moves(&self, labels: &mut [usize], rng: &mut rng::Rng) -> bool {
        let n = self.len();
        let two_m = 2.0 * self.total;
        let mut tot = vec![0.0; n];
        let mut size = vec![0usize; n];
        for v in 0..n {
            tot[labels[v]] += self.strength[v];
            size[labels[v]] += 1;
        }
        let mut free: Vec<usize> = (0..n).rev().filter(|&c| size[c] == 0).collect();
        let mut link = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        let mut any_move = false;
        loop {
            order.shuffle(rng);
            let mut moved = false;
            for &v in &order {
                let cv = labels[v];
                let k = self.strength[v];
                for &(u, w) in &self.adj[v] {
                    let cu = labels[u];
                    if link[cu] == 0.0 {
                        touched.push(cu);
                    }
                    link[cu] += w;
                }
                tot[cv] -= k;
                size[cv] -= 1;

                let gain = |c: usize| link[c] - tot[c] * k / two_m;
                let stay = gain(cv);
                touched.sort_unstable();
                let mut best = cv;
                let mut best_gain = stay;
                let mut alternative: Option<(usize, f64)> = None;
                for &c in touched.iter().filter(|&&c| c != cv) {
                    let gc = gain(c);
                    match alternative {
                        Some((_, ga)) if gc <= ga + GAIN_EPS => {}
                        _ => alternative = Some((c, gc)),
                    }
                }
                if let Some((c, gc)) = alternative {
                    if gc > stay + GAIN_EPS {
                        best = c;
                        best_gain = gc;
                    }
                }
                // a fresh community has zero gain
                if size[cv] > 0 && best_gain < -GAIN_EPS {
                    if let Some(c) = free.pop() {
                        best = c;
                    }
                }
                if best != cv {
                    if size[cv] == 0 {
                        free.push(cv);
                    }
                    moved = true;
                }
                labels[v] = best;
                tot[best] += k;
                size[best] += 1;
                for &c in &touched {
                    link[c] = 0.0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            any_move = true;
        }
        any_move
    }
}

/// Louvain partition of `g`; all singletons when `g` has no edges.
pub fn louvain(g: &Graph, seed: u64) -> Partition {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Partition::singletons(n);
    }
    let mut rng = rng::seeded(seed);
    let base = Level::from_graph(g);
    let mut labels: Vec<usize> = (0..n).collect();
    for _ in 0..MAX_ROUNDS {
        labels = multilevel(&base, &labels, &mut rng);
        if !base.local_moves(&mut labels, &mut rng) {
            break;
        }
    }
    // the last step above is always a converged local-move phase on `base`
    Partition::from_labels(&labels)
}

/// Runs the aggregation hierarchy starting from the communities of `start`
/// and returns the flattened labels.
fn multilevel(base: &Level, start: &[usize], rng: &mut rng::Rng) -> Vec<usize> {
    let start = Partition::from_labels(start);
    let mut mapping: Vec<usize> = start.labels().to_vec();
    // canonical singletons are the identity labeling
    let mut level = if start.community_count() == base.len() {
        base.clone()
    } else {
        base.aggregate(&mapping, start.community_count())
    };
    loop {
        let mut comm: Vec<usize> = (0..level.len()).collect();
        if !level.local_moves(&mut comm, rng) {
            break;
        }
        let grouped = Partition::from_labels(&comm);
        for m in mapping.iter_mut() {
            *m = grouped.community_of(*m);
        }
        level = level.aggregate(grouped.labels(), grouped.community_count());
    }
    mapping
}
