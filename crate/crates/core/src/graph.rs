//! Undirected simple graphs over dense node ids.

use rand::seq::index;

use crate::union_find::UnionFind;
use crate::{rng, Error, Partition, Result};

/// Undirected simple graph with positive edge weights (default 1.0).
///
/// Adjacency lists are kept sorted by neighbor id, which makes neighborhood
/// intersections linear and edge iteration canonical: `edges()` yields
/// `(u, v, w)` with `u < v` in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adj: Vec<Vec<(usize, f64)>>,
    edge_count: usize,
}

/// Parameters of a uniform random edge deletion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeletionSpec {
    pub delta: f64,
    pub seed: u64,
}

impl DeletionSpec {
    pub fn new(delta: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidArgument(format!(
                "deletion rate {delta} outside [0, 1]"
            )));
        }
        Ok(Self { delta, seed })
    }
}

impl Graph {
    pub fn new(node_count: usize) -> Self {
        Self {
            adj: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    /// Builds a graph from unweighted pairs. Repeated pairs collapse to one edge.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_weighted_edges(node_count, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    /// Bulk construction. For repeated pairs the last weight wins, matching
    /// repeated `add_edge` calls.
    pub fn from_weighted_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); node_count];
        for (u, v, w) in edges {
            check_edge(node_count, u, v, w)?;
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let mut edge_count = 0;
        for list in &mut adj {
            // stable sort keeps insertion order among duplicates; keep the last
            list.sort_by_key(|&(v, _)| v);
            let mut deduped: Vec<(usize, f64)> = Vec::with_capacity(list.len());
            for &(v, w) in list.iter() {
                match deduped.last_mut() {
                    Some(last) if last.0 == v => last.1 = w,
                    _ => deduped.push((v, w)),
                }
            }
            edge_count += deduped.len();
            *list = deduped;
        }
        Ok(Self {
            adj,
            edge_count: edge_count / 2,
        })
    }

    /// Inserts `{u, v}` with weight `w`, overwriting the weight if the edge
    /// already exists.
    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        check_edge(self.node_count(), u, v, w)?;
        let inserted = upsert(&mut self.adj[u], v, w);
        upsert(&mut self.adj[v], u, w);
        if inserted {
            self.edge_count += 1;
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Sum of incident edge weights.
    pub fn strength(&self, u: usize) -> f64 {
        self.adj[u].iter().map(|&(_, w)| w).sum()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().map(|&(v, _)| v)
    }

    /// Sorted `(neighbor, weight)` pairs of `u`.
    pub fn adjacency(&self, u: usize) -> &[(usize, f64)] {
        &self.adj[u]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.weight(u, v).is_some()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }

    /// Every edge once as `(u, v, w)` with `u < v`, lexicographically ordered.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&(v, _)| v > u)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    /// Copy with exactly `round(delta * |E|)` uniformly chosen edges removed
    /// (rounding half to even). The node set is unchanged.
    pub fn delete_edges_random(&self, spec: &DeletionSpec) -> Result<Graph> {
        if !(0.0..=1.0).contains(&spec.delta) {
            return Err(Error::InvalidArgument(format!(
                "deletion rate {} outside [0, 1]",
                spec.delta
            )));
        }
        let m = self.edge_count;
        let remove = (spec.delta * m as f64).round_ties_even() as usize;
        if remove == 0 {
            return Ok(self.clone());
        }
        let mut rng = rng::seeded(spec.seed);
        let mut drop = vec![false; m];
        for i in index::sample(&mut rng, m, remove.min(m)) {
            drop[i] = true;
        }
        let kept = self
            .edges()
            .zip(drop)
            .filter(|(_, d)| !d)
            .map(|(e, _)| e);
        Graph::from_weighted_edges(self.node_count(), kept)
    }

    /// Copy retaining exactly the edges with weight `>= tau`.
    pub fn prune_below(&self, tau: f64) -> Graph {
        let mut edge_count = 0;
        let adj = self
            .adj
            .iter()
            .map(|list| {
                let kept: Vec<_> = list.iter().copied().filter(|&(_, w)| w >= tau).collect();
                edge_count += kept.len();
                kept
            })
            .collect();
        Graph {
            adj,
            edge_count: edge_count / 2,
        }
    }

    pub fn connected_components(&self) -> Partition {
        let mut uf = UnionFind::new(self.node_count());
        for (u, v, _) in self.edges() {
            uf.union(u, v);
        }
        Partition::from_labels(&uf.roots())
    }
}

fn check_edge(node_count: usize, u: usize, v: usize, w: f64) -> Result<()> {
    for node in [u, v] {
        if node >= node_count {
            return Err(Error::NodeOutOfRange { node, node_count });
        }
    }
    if u == v {
        return Err(Error::SelfLoop(u));
    }
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "edge ({u}, {v}) has non-positive weight {w}"
        )));
    }
    Ok(())
}

fn upsert(list: &mut Vec<(usize, f64)>, v: usize, w: f64) -> bool {
    match list.binary_search_by_key(&v, |&(x, _)| x) {
        Ok(i) => {
            list[i].1 = w;
            false
        }
        Err(i) => {
            list.insert(i, (v, w));
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3_plus_isolated() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap()
    }

    fn complete(n: usize, offset: usize, g: &mut Graph) {
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u + offset, v + offset, 1.0).unwrap();
            }
        }
    }

    #[test]
    fn add_edge_basics() {
        let mut g = Graph::new(2);
        g.add_edge(0, 1, 1.0).unwrap();
        assert_eq!(g.edge_count(), 1);
        g.add_edge(1, 0, 2.5).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(0, 1), Some(2.5));
        assert!(matches!(g.add_edge(0, 0, 1.0), Err(Error::SelfLoop(0))));
        assert!(matches!(
            g.add_edge(0, 2, 1.0),
            Err(Error::NodeOutOfRange { node: 2, .. })
        ));
        assert!(g.add_edge(0, 1, 0.0).is_err());
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let g = Graph::from_edges(5, [(3, 1), (1, 0), (4, 1), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.neighbors(1).collect::<Vec<_>>(), vec![0, 3, 4]);
        for (u, v, _) in g.edges() {
            assert!(g.has_edge(v, u));
        }
        let edges: Vec<_> = g.edges().map(|(u, v, _)| (u, v)).collect();
        assert_eq!(edges, vec![(0, 1), (1, 3), (1, 4)]);
    }

    #[test]
    fn deletion_zero_is_identity() {
        let g = path3_plus_isolated();
        let spec = DeletionSpec::new(0.0, 9).unwrap();
        assert_eq!(g.delete_edges_random(&spec).unwrap(), g);
    }

    #[test]
    fn deletion_removes_exact_count_deterministically() {
        let g = Graph::from_edges(101, (0..100).map(|i| (i, i + 1))).unwrap();
        let spec = DeletionSpec { delta: 0.5, seed: 3 };
        let a = g.delete_edges_random(&spec).unwrap();
        let b = g.delete_edges_random(&spec).unwrap();
        assert_eq!(a.edge_count(), 50);
        assert_eq!(a.node_count(), 101);
        assert_eq!(a, b);
        for (u, v, _) in a.edges() {
            assert!(g.has_edge(u, v));
        }
    }

    #[test]
    fn deletion_rejects_bad_delta() {
        let g = path3_plus_isolated();
        assert!(DeletionSpec::new(1.5, 0).is_err());
        let spec = DeletionSpec { delta: -0.1, seed: 0 };
        assert!(g.delete_edges_random(&spec).is_err());
    }

    #[test]
    fn deletion_rounds_half_to_even() {
        // 5 edges * 0.5 = 2.5 -> 2
        let g = Graph::from_edges(6, (0..5).map(|i| (i, i + 1))).unwrap();
        let out = g.delete_edges_random(&DeletionSpec { delta: 0.5, seed: 1 }).unwrap();
        assert_eq!(out.edge_count(), 3);
    }

    #[test]
    fn components_examples() {
        let g = Graph::new(5);
        assert_eq!(g.connected_components().community_count(), 5);

        let p = path3_plus_isolated().connected_components();
        assert_eq!(p.communities(), vec![vec![0, 1, 2], vec![3]]);

        let mut g = Graph::new(8);
        complete(4, 0, &mut g);
        complete(4, 4, &mut g);
        g.add_edge(3, 4, 1.0).unwrap();
        assert_eq!(g.connected_components().community_count(), 1);
    }

    #[test]
    fn prune_examples() {
        let g = Graph::from_weighted_edges(4, [(0, 1, 0.3), (1, 2, 0.5), (2, 3, 0.9)]).unwrap();
        let kept: Vec<_> = g.prune_below(0.5).edges().map(|(u, v, _)| (u, v)).collect();
        assert_eq!(kept, vec![(1, 2), (2, 3)]);
        assert_eq!(g.prune_below(0.0), g);
        assert_eq!(g.prune_below(1.0).edge_count(), 0);
    }

    fn arb_weighted_graph() -> impl Strategy<Value = Graph> {
        (2usize..20).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n, 0.01f64..1.0), 0..60).prop_map(move |raw| {
                let edges = raw.into_iter().filter(|(u, v, _)| u != v);
                Graph::from_weighted_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn prune_composes_as_max(g in arb_weighted_graph(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
            prop_assert_eq!(g.prune_below(a).prune_below(b), g.prune_below(a.max(b)));
        }

        #[test]
        fn deletion_count_is_exact(g in arb_weighted_graph(), delta in 0.0f64..=1.0, seed: u64) {
            let out = g.delete_edges_random(&DeletionSpec { delta, seed }).unwrap();
            let removed = (delta * g.edge_count() as f64).round_ties_even() as usize;
            prop_assert_eq!(out.edge_count(), g.edge_count() - removed);
        }

        #[test]
        fn components_match_reachability(g in arb_weighted_graph()) {
            let p = g.connected_components();
            prop_assert_eq!(p.node_count(), g.node_count());
            // BFS from every node
            for s in 0..g.node_count() {
                let mut seen = vec![false; g.node_count()];
                let mut stack = vec![s];
                seen[s] = true;
                while let Some(u) = stack.pop() {
                    for v in g.neighbors(u) {
                        if !seen[v] {
                            seen[v] = true;
                            stack.push(v);
                        }
                    }
                }
                for t in 0..g.node_count() {
                    prop_assert_eq!(seen[t], p.same_community(s, t));
                }
            }
        }
    }
}
