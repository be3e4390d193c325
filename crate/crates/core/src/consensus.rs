//! Ensemble aggregation through a thresholded co-community network.
//!
//! The co-community network links two nodes with weight equal to the
//! fraction of ensemble partitions that place them in the same community.
//! Pruning it at a threshold `tau` and taking connected components yields a
//! candidate partition; each candidate is scored by the size-weighted mean of
//! its per-community consensus (mean pairwise co-community weight), and the
//! best-scoring threshold wins. Remaining singletons are finally attached to
//! the community they co-occur with most.

use rayon::prelude::*;

use crate::union_find::UnionFind;
use crate::{Error, Graph, Partition, Result};

/// Score ties closer than this resolve toward the smaller threshold.
const SCORE_EPS: f64 = 1e-12;

/// Co-membership frequencies of an ensemble of partitions.
#[derive(Debug, Clone, PartialEq)]
pub struct CoCommunityNetwork {
    graph: Graph,
    /// `(u, v, count)` with `u < v`, lexicographic.
    counts: Vec<(usize, usize, u32)>,
    ensemble_size: usize,
}

/// Diagnostics for one candidate threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauScore {
    pub tau: f64,
    pub n_components: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsensusResult {
    /// The output partition (after singleton attachment, when applied).
    pub partition: Partition,
    /// Connected components of the network pruned at `tau`.
    pub thresholded: Partition,
    pub tau: f64,
    pub score: f64,
    /// One entry per threshold `1/n, 2/n, ..., n/n`.
    pub per_tau: Vec<TauScore>,
}

impl CoCommunityNetwork {
    pub fn build(node_count: usize, partitions: &[Partition]) -> Result<Self> {
        if partitions.is_empty() {
            return Err(Error::InvalidArgument("empty partition ensemble".into()));
        }
        if let Some(p) = partitions.iter().find(|p| p.node_count() != node_count) {
            return Err(Error::InvalidArgument(format!(
                "partition covers {} nodes, expected {node_count}",
                p.node_count()
            )));
        }
        let n = partitions.len();
        let members: Vec<Vec<Vec<usize>>> = partitions.iter().map(Partition::communities).collect();
        let rows: Vec<Vec<(usize, usize, u32)>> = (0..node_count)
            .into_par_iter()
            .map_init(
                || (vec![0u32; node_count], Vec::new()),
                |(count, touched), u| {
                    for (p, comms) in partitions.iter().zip(&members) {
                        let group = &comms[p.community_of(u)];
                        // members are ascending; only pairs with v > u
                        let start = group.partition_point(|&v| v <= u);
                        for &v in &group[start..] {
                            if count[v] == 0 {
                                touched.push(v);
                            }
                            count[v] += 1;
                        }
                    }
                    touched.sort_unstable();
                    let row = touched.iter().map(|&v| (u, v, count[v])).collect();
                    for &v in touched.iter() {
                        count[v] = 0;
                    }
                    touched.clear();
                    row
                },
            )
            .collect();
        let counts: Vec<(usize, usize, u32)> = rows.into_iter().flatten().collect();
        let graph = Graph::from_weighted_edges(
            node_count,
            counts.iter().map(|&(u, v, c)| (u, v, c as f64 / n as f64)),
        )?;
        Ok(Self {
            graph,
            counts,
            ensemble_size: n,
        })
    }

    /// The weighted co-community graph; weights are `count / ensemble_size`.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn ensemble_size(&self) -> usize {
        self.ensemble_size
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Number of partitions placing `u` and `v` together.
    pub fn count(&self, u: usize, v: usize) -> u32 {
        let key = (u.min(v), u.max(v));
        self.counts
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&key))
            .map(|i| self.counts[i].2)
            .unwrap_or(0)
    }

    /// Co-membership counts `(u, v, count)` with `u < v`.
    pub fn counts(&self) -> &[(usize, usize, u32)] {
        &self.counts
    }

    /// Connected components after dropping pairs seen together fewer than
    /// `min_count` times, i.e. pruning at `tau = min_count / n`.
    pub fn components_at(&self, min_count: u32) -> Partition {
        let mut uf = UnionFind::new(self.node_count());
        for &(u, v, c) in &self.counts {
            if c >= min_count {
                uf.union(u, v);
            }
        }
        Partition::from_labels(&uf.roots())
    }
}

/// Mean pairwise co-community weight over all unordered pairs of
/// `community` (absent pairs count as 0). Communities with fewer than two
/// members have no pairs and score 0.
pub fn community_consensus_score(gcc: &CoCommunityNetwork, community: &[usize]) -> f64 {
    let size = community.len();
    if size < 2 {
        return 0.0;
    }
    let mut member = vec![false; gcc.node_count()];
    for &v in community {
        member[v] = true;
    }
    let mut sum = 0.0;
    for &u in community {
        for &(v, w) in gcc.graph.adjacency(u) {
            if v > u && member[v] {
                sum += w;
            }
        }
    }
    sum / pairs(size)
}

/// Size-weighted consensus `S = sum_k (N_k / N) * m_k`, where `m_k` is the
/// consensus score of community `k`.
///
/// Singletons contribute 0. Scoring them as perfectly consistent would make
/// the top threshold unbeatable: nodes that share a community in every
/// partition always form cliques of weight 1, so `S` would be 1 there for
/// any ensemble.
pub fn partition_score(gcc: &CoCommunityNetwork, p: &Partition) -> Result<f64> {
    if p.node_count() != gcc.node_count() {
        return Err(Error::InvalidArgument(format!(
            "partition covers {} nodes, network has {}",
            p.node_count(),
            gcc.node_count()
        )));
    }
    let n = p.node_count();
    if n == 0 {
        return Ok(0.0);
    }
    let sizes = p.sizes();
    let mut inside = vec![0.0; sizes.len()];
    for (u, v, w) in gcc.graph.edges() {
        if p.same_community(u, v) {
            inside[p.community_of(u)] += w;
        }
    }
    Ok(sizes
        .iter()
        .zip(&inside)
        .map(|(&size, &sum)| {
            let m = if size < 2 { 0.0 } else { sum / pairs(size) };
            size as f64 / n as f64 * m
        })
        .sum())
}

fn pairs(size: usize) -> f64 {
    (size * (size - 1)) as f64 / 2.0
}

/// Scores the components of the network pruned at every threshold
/// `j / n`, `j = 1..=n`, and returns the best one. Ties go to the smallest
/// threshold. `partition` and `thresholded` are both the winning components.
pub fn select_threshold(gcc: &CoCommunityNetwork) -> ConsensusResult {
    let n = gcc.ensemble_size;
    // thresholds between the same consecutive distinct counts prune identically
    let mut distinct: Vec<u32> = gcc.counts.iter().map(|&(_, _, c)| c).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let effective = |j: u32| -> Option<u32> {
        let i = distinct.partition_point(|&c| c < j);
        distinct.get(i).copied()
    };
    let mut keys: Vec<Option<u32>> = (1..=n as u32).map(effective).collect();
    keys.sort_unstable();
    keys.dedup();
    let evaluated: Vec<(Option<u32>, Partition, f64)> = keys
        .into_par_iter()
        .map(|key| {
            let p = match key {
                Some(c) => gcc.components_at(c),
                None => Partition::singletons(gcc.node_count()),
            };
            let s = partition_score(gcc, &p).expect("components cover the network");
            (key, p, s)
        })
        .collect();
    let lookup = |key: Option<u32>| {
        evaluated
            .iter()
            .find(|(k, _, _)| *k == key)
            .expect("every key evaluated")
    };

    let mut per_tau = Vec::with_capacity(n);
    let mut best: Option<(f64, f64, Option<u32>)> = None;
    for j in 1..=n as u32 {
        let key = effective(j);
        let (_, p, s) = lookup(key);
        let tau = j as f64 / n as f64;
        per_tau.push(TauScore {
            tau,
            n_components: p.community_count(),
            score: *s,
        });
        match best {
            Some((_, best_score, _)) if *s <= best_score + SCORE_EPS => {}
            _ => best = Some((tau, *s, key)),
        }
    }
    let (tau, score, key) = best.expect("ensemble has at least one partition");
    let partition = lookup(key).1.clone();
    ConsensusResult {
        thresholded: partition.clone(),
        partition,
        tau,
        score,
        per_tau,
    }
}

/// Moves every singleton with co-community edges into the non-singleton
/// community of `p` it has the highest mean co-community weight to (absent
/// edges count as 0; ties go to the lowest community id). Singletons whose
/// best mean is zero stay alone, and non-singleton members never move.
pub fn attach_singletons(gcc: &CoCommunityNetwork, p: &Partition) -> Partition {
    let sizes = p.sizes();
    let mut labels = p.labels().to_vec();
    let mut sums = vec![0.0; sizes.len()];
    let mut touched = Vec::new();
    for s in 0..p.node_count() {
        if sizes[p.community_of(s)] != 1 {
            continue;
        }
        for &(v, w) in gcc.graph.adjacency(s) {
            let c = p.community_of(v);
            if sizes[c] < 2 {
                continue;
            }
            if sums[c] == 0.0 {
                touched.push(c);
            }
            sums[c] += w;
        }
        touched.sort_unstable();
        let mut best: Option<(usize, f64)> = None;
        for &c in &touched {
            let mean = sums[c] / sizes[c] as f64;
            match best {
                Some((_, m)) if mean <= m => {}
                _ => best = Some((c, mean)),
            }
        }
        if let Some((c, mean)) = best {
            if mean > 0.0 {
                labels[s] = c;
            }
        }
        for &c in &touched {
            sums[c] = 0.0;
        }
        touched.clear();
    }
    Partition::from_labels(&labels)
}

/// Full aggregation: threshold selection followed by singleton attachment.
pub fn aggregate(gcc: &CoCommunityNetwork) -> ConsensusResult {
    let mut result = select_threshold(gcc);
    result.partition = attach_singletons(gcc, &result.thresholded);
    result
}

/// Aggregation at a caller-chosen threshold, rounded up to the next
/// multiple of `1 / n`.
pub fn aggregate_at(gcc: &CoCommunityNetwork, tau: f64) -> ConsensusResult {
    let n = gcc.ensemble_size as f64;
    let j = ((tau * n - 1e-9).ceil() as u32).clamp(1, gcc.ensemble_size as u32);
    let thresholded = gcc.components_at(j);
    let score = partition_score(gcc, &thresholded).expect("components cover the network");
    let tau = j as f64 / n;
    ConsensusResult {
        partition: attach_singletons(gcc, &thresholded),
        per_tau: vec![TauScore {
            tau,
            n_components: thresholded.community_count(),
            score,
        }],
        thresholded,
        tau,
        score,
    }
}
