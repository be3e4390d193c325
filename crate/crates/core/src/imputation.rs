//! Edge distribution over scored candidates and imputed-graph sampling.

use rand::Rng as _;

use crate::{rng::Rng, Error, Graph, Result, ScoredEdgeSet};

/// Probability distribution over candidate edges proportional to their
/// link-predictor scores: `P(e) = score(e) / sum(scores)`.
///
/// Edges are held in the ranking order of the scored set they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDistribution {
    edges: Vec<(usize, usize)>,
    probabilities: Vec<f64>,
}

impl EdgeDistribution {
    pub fn from_scored(scored: &ScoredEdgeSet) -> Result<Self> {
        if scored.is_empty() {
            return Err(Error::EmptyInput("no candidate edges to impute"));
        }
        let total: f64 = scored.entries().iter().map(|e| e.score).sum();
        let (edges, probabilities) = scored
            .entries()
            .iter()
            .map(|e| ((e.u, e.v), e.score / total))
            .unzip();
        Ok(Self {
            edges,
            probabilities,
        })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Draws `k` uniformly from `1..=edge_count`, then samples that many
    /// distinct edges. Returns the sampled edges and `k`.
    pub fn sample_k(&self, edge_count: usize, rng: &mut Rng) -> (Vec<(usize, usize)>, usize) {
        let k = rng.random_range(1..=edge_count.max(1));
        (self.sample_exact(k, rng), k)
    }

    /// Samples `min(k, len)` distinct edges without replacement, each
    /// successive draw proportional to the remaining probabilities
    /// (exponential keys: the `k` smallest `Exp(1) / p` win). The result is
    /// in distribution order.
    pub fn sample_exact(&self, k: usize, rng: &mut Rng) -> Vec<(usize, usize)> {
        if k >= self.len() {
            return self.edges.clone();
        }
        if k == 0 {
            return Vec::new();
        }
        let mut keys: Vec<(f64, usize)> = self
            .probabilities
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                // 1 - U lies in (0, 1], so the logarithm is finite
                let u: f64 = rng.random();
                (-(1.0 - u).ln() / p, i)
            })
            .collect();
        keys.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut chosen: Vec<usize> = keys[..k].iter().map(|&(_, i)| i).collect();
        chosen.sort_unstable();
        chosen.into_iter().map(|i| self.edges[i]).collect()
    }
}

/// `g` with `edges` added at weight 1.0. The added edges must be new and
/// distinct.
pub fn impute(g: &Graph, edges: &[(usize, usize)]) -> Result<Graph> {
    for &(u, v) in edges {
        if g.has_edge(u, v) {
            return Err(Error::EdgeOverlap(u, v));
        }
    }
    let added = edges.iter().map(|&(u, v)| (u, v, 1.0));
    let out = Graph::from_weighted_edges(g.node_count(), g.edges().chain(added))?;
    if out.edge_count() != g.edge_count() + edges.len() {
        return Err(Error::InvalidArgument(
            "imputed edge set contains duplicate pairs".into(),
        ));
    }
    Ok(out)
}
