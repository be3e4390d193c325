//! Neighborhood link predictors over distance-2 candidate pairs.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::{Error, Graph, Partition, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PredictorKind {
    AdamicAdar,
    CommonNeighbors,
    #[default]
    Jaccard,
}

impl PredictorKind {
    pub const ALL: [PredictorKind; 3] = [
        PredictorKind::AdamicAdar,
        PredictorKind::CommonNeighbors,
        PredictorKind::Jaccard,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PredictorKind::AdamicAdar => "adamic-adar",
            PredictorKind::CommonNeighbors => "common-neighbors",
            PredictorKind::Jaccard => "jaccard",
        }
    }

    /// Score from the shared-neighbor statistics of a pair.
    fn combine(self, common: usize, aa_sum: f64, deg_u: usize, deg_v: usize) -> f64 {
        match self {
            PredictorKind::CommonNeighbors => common as f64,
            PredictorKind::AdamicAdar => aa_sum,
            PredictorKind::Jaccard => {
                let union = deg_u + deg_v - common;
                if union == 0 {
                    0.0
                } else {
                    common as f64 / union as f64
                }
            }
        }
    }
}

impl fmt::Display for PredictorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PredictorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aa" | "adamic-adar" | "adamicadar" => Ok(PredictorKind::AdamicAdar),
            "cn" | "common-neighbors" | "commonneighbors" => Ok(PredictorKind::CommonNeighbors),
            "jaccard" | "jc" => Ok(PredictorKind::Jaccard),
            other => Err(Error::Config(format!("unknown link predictor `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredEdge {
    pub u: usize,
    pub v: usize,
    pub score: f64,
}

/// Candidate missing edges with strictly positive scores.
///
/// Entries are held in ranking order: score descending, then `(u, v)`
/// ascending, with `u < v` in every entry.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredEdgeSet {
    entries: Vec<ScoredEdge>,
    source_edge_count: usize,
}

impl ScoredEdgeSet {
    /// Builds a set from raw entries, normalizing endpoint order and sorting
    /// into ranking order. Non-positive scores are dropped.
    pub fn new(entries: Vec<ScoredEdge>, source_edge_count: usize) -> Result<Self> {
        let mut entries: Vec<ScoredEdge> = entries
            .into_iter()
            .filter(|e| e.score > 0.0)
            .map(|e| ScoredEdge {
                u: e.u.min(e.v),
                v: e.u.max(e.v),
                score: e.score,
            })
            .collect();
        for e in &entries {
            if e.u == e.v {
                return Err(Error::SelfLoop(e.u));
            }
            if !e.score.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite score for ({}, {})",
                    e.u, e.v
                )));
            }
        }
        entries.sort_by(ranking);
        if entries.windows(2).any(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            let dup: Vec<_> = {
                let mut pairs: Vec<_> = entries.iter().map(|e| (e.u, e.v)).collect();
                pairs.sort_unstable();
                pairs.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0]).collect()
            };
            return Err(Error::InvalidArgument(format!(
                "duplicate candidate pair {:?}",
                dup[0]
            )));
        }
        Ok(Self {
            entries,
            source_edge_count,
        })
    }

    pub fn entries(&self) -> &[ScoredEdge] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Edge count of the graph the candidates were scored on.
    pub fn source_edge_count(&self) -> usize {
        self.source_edge_count
    }
}

fn ranking(a: &ScoredEdge, b: &ScoredEdge) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| (a.u, a.v).cmp(&(b.u, b.v)))
}

/// Non-adjacent pairs sharing at least one neighbor, as `(u, v)` with `u < v`
/// in lexicographic order.
pub fn candidate_edges(g: &Graph) -> Vec<(usize, usize)> {
    let per_node: Vec<Vec<(usize, usize)>> = (0..g.node_count())
        .into_par_iter()
        .map_init(
            || Scratch::new(g.node_count()),
            |scratch, u| {
                scratch.collect(g, u);
                let mut out: Vec<_> = scratch.touched.iter().map(|&v| (u, v)).collect();
                out.sort_unstable();
                scratch.reset();
                out
            },
        )
        .collect();
    per_node.into_iter().flatten().collect()
}

/// Score of a single candidate pair. The pair must be non-adjacent.
pub fn score(g: &Graph, u: usize, v: usize, kind: PredictorKind) -> Result<f64> {
    let n = g.node_count();
    for node in [u, v] {
        if node >= n {
            return Err(Error::NodeOutOfRange { node, node_count: n });
        }
    }
    if u == v {
        return Err(Error::SelfLoop(u));
    }
    if g.has_edge(u, v) {
        return Err(Error::InvalidArgument(format!(
            "({u}, {v}) is already an edge"
        )));
    }
    let (mut common, mut aa) = (0usize, 0.0f64);
    let (a, b) = (g.adjacency(u), g.adjacency(v));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                common += 1;
                aa += adamic_adar_term(g.degree(a[i].0));
                i += 1;
                j += 1;
            }
        }
    }
    Ok(kind.combine(common, aa, g.degree(u), g.degree(v)))
}

/// Scores every distance-2 candidate of `g`; zero-score pairs are dropped.
pub fn score_all(g: &Graph, kind: PredictorKind) -> ScoredEdgeSet {
    let per_node: Vec<Vec<ScoredEdge>> = (0..g.node_count())
        .into_par_iter()
        .map_init(
            || Scratch::new(g.node_count()),
            |scratch, u| {
                scratch.collect(g, u);
                let out = scratch
                    .touched
                    .iter()
                    .map(|&v| ScoredEdge {
                        u,
                        v,
                        score: kind.combine(
                            scratch.common[v],
                            scratch.aa[v],
                            g.degree(u),
                            g.degree(v),
                        ),
                    })
                    .filter(|e| e.score > 0.0)
                    .collect();
                scratch.reset();
                out
            },
        )
        .collect();
    let mut entries: Vec<ScoredEdge> = per_node.into_iter().flatten().collect();
    entries.par_sort_unstable_by(ranking);
    ScoredEdgeSet {
        entries,
        source_edge_count: g.edge_count(),
    }
}

/// Fraction of the top-ranked candidates whose endpoints share a community of
/// `truth`.
///
/// The cutoff is `ceil(k_fraction * original_edge_count)` entries, where
/// `original_edge_count` is the size of the network before any deletion and
/// `k_fraction` is a fraction (0.1 means 10%). If the cutoff exceeds the
/// number of candidates, all candidates are ranked.
pub fn intra_edge_precision(
    scored: &ScoredEdgeSet,
    truth: &Partition,
    k_fraction: f64,
    original_edge_count: usize,
) -> Result<f64> {
    if scored.is_empty() {
        return Err(Error::EmptyInput("no scored candidate edges"));
    }
    if !(k_fraction > 0.0 && k_fraction.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "top-k fraction must be positive, got {k_fraction}"
        )));
    }
    let cutoff = ((k_fraction * original_edge_count as f64).ceil() as usize)
        .clamp(1, scored.len());
    let mut hits = 0usize;
    for e in &scored.entries[..cutoff] {
        if e.u.max(e.v) >= truth.node_count() {
            return Err(Error::NodeOutOfRange {
                node: e.u.max(e.v),
                node_count: truth.node_count(),
            });
        }
        if truth.same_community(e.u, e.v) {
            hits += 1;
        }
    }
    Ok(hits as f64 / cutoff as f64)
}

fn adamic_adar_term(degree: usize) -> f64 {
    1.0 / (degree as f64).ln()
}

/// Per-source accumulator of shared-neighbor statistics.
struct Scratch {
    common: Vec<usize>,
    aa: Vec<f64>,
    adjacent: Vec<bool>,
    touched: Vec<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            common: vec![0; n],
            aa: vec![0.0; n],
            adjacent: vec![false; n],
            touched: Vec::new(),
        }
    }

    /// Accumulates statistics for every candidate `v > u` of `u`.
    fn collect(&mut self, g: &Graph, u: usize) {
        for w in g.neighbors(u) {
            self.adjacent[w] = true;
        }
        for z in g.neighbors(u) {
            let term = adamic_adar_term(g.degree(z));
            for v in g.neighbors(z) {
                if v <= u || self.adjacent[v] {
                    continue;
                }
                if self.common[v] == 0 {
                    self.touched.push(v);
                }
                self.common[v] += 1;
                self.aa[v] += term;
            }
        }
        self.touched.sort_unstable();
        for w in g.neighbors(u) {
            self.adjacent[w] = false;
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.common[v] = 0;
            self.aa[v] = 0.0;
        }
        self.touched.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn clique(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn candidate_examples() {
        assert_eq!(candidate_edges(&path()), vec![(0, 2)]);
        assert!(candidate_edges(&clique(4)).is_empty());
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(candidate_edges(&star), vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn path_scores() {
        let g = path();
        assert_eq!(score(&g, 0, 2, PredictorKind::CommonNeighbors).unwrap(), 1.0);
        assert_eq!(score(&g, 0, 2, PredictorKind::Jaccard).unwrap(), 1.0);
        let aa = score(&g, 0, 2, PredictorKind::AdamicAdar).unwrap();
        assert!((aa - 1.0 / 2f64.ln()).abs() < 1e-12);
        assert!((aa - 1.4427).abs() < 1e-4);
        assert!(score(&g, 0, 1, PredictorKind::Jaccard).is_err());
    }

    #[test]
    fn score_all_examples() {
        for kind in PredictorKind::ALL {
            assert!(score_all(&clique(4), kind).is_empty());
            let s = score_all(&path(), kind);
            assert_eq!(s.len(), 1);
            assert_eq!((s.entries()[0].u, s.entries()[0].v), (0, 2));
        }
    }

    #[test]
    fn predictor_names_parse() {
        for kind in PredictorKind::ALL {
            assert_eq!(kind.name().parse::<PredictorKind>().unwrap(), kind);
        }
        assert!("katz".parse::<PredictorKind>().is_err());
    }

    #[test]
    fn precision_extremes_and_empty() {
        // two triangles' worth of candidates: (0,2) intra, (2,4) inter
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let scored = score_all(&g, PredictorKind::CommonNeighbors);
        let all_one = Partition::single_community(5);
        assert_eq!(intra_edge_precision(&scored, &all_one, 1.0, 4).unwrap(), 1.0);
        let alone = Partition::singletons(5);
        assert_eq!(intra_edge_precision(&scored, &alone, 1.0, 4).unwrap(), 0.0);
        let empty = score_all(&clique(3), PredictorKind::Jaccard);
        assert!(matches!(
            intra_edge_precision(&empty, &all_one, 0.1, 3),
            Err(Error::EmptyInput(_))
        ));
        assert!(intra_edge_precision(&scored, &all_one, 0.0, 4).is_err());
    }

    #[test]
    fn scored_set_rejects_duplicates() {
        let e = |u, v| ScoredEdge { u, v, score: 1.0 };
        assert!(ScoredEdgeSet::new(vec![e(0, 1), e(1, 0)], 0).is_err());
        let s = ScoredEdgeSet::new(vec![e(2, 1), ScoredEdge { u: 0, v: 3, score: 0.0 }], 0).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s.entries()[0].u, s.entries()[0].v), (1, 2));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (2usize..25).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n), 0..80).prop_map(move |raw| {
                Graph::from_edges(n, raw.into_iter().filter(|(u, v)| u != v)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn score_all_matches_pairwise_definition(g in arb_graph()) {
            let n = g.node_count();
            for kind in PredictorKind::ALL {
                let scored = score_all(&g, kind);
                // independent enumeration over all non-adjacent pairs
                let mut expected = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if g.has_edge(u, v) { continue; }
                        let nu: Vec<usize> = g.neighbors(u).collect();
                        let nv: Vec<usize> = g.neighbors(v).collect();
                        let common: Vec<usize> = nu.iter().copied().filter(|x| nv.contains(x)).collect();
                        if common.is_empty() { continue; }
                        let union = nu.len() + nv.len() - common.len();
                        let s = match kind {
                            PredictorKind::CommonNeighbors => common.len() as f64,
                            PredictorKind::Jaccard => common.len() as f64 / union as f64,
                            PredictorKind::AdamicAdar => common.iter().map(|&z| 1.0 / (g.degree(z) as f64).ln()).sum(),
                        };
                        expected.push((u, v, s));
                    }
                }
                prop_assert_eq!(scored.len(), expected.len());
                for (u, v, s) in expected {
                    let got = scored.entries().iter().find(|e| (e.u, e.v) == (u, v)).unwrap();
                    prop_assert!((got.score - s).abs() < 1e-9);
                    prop_assert!(!g.has_edge(u, v));
                    if kind == PredictorKind::Jaccard {
                        prop_assert!(got.score > 0.0 && got.score <= 1.0);
                    }
                    if kind == PredictorKind::CommonNeighbors {
                        prop_assert!(got.score >= 1.0);
                    }
                }
                for w in scored.entries().windows(2) {
                    prop_assert!(ranking(&w[0], &w[1]) == Ordering::Less);
                }
            }
        }

        #[test]
        fn common_neighbor_scores_are_monotone(g in arb_graph()) {
            // adding an edge z-v where z neighbors u cannot lower CN or AA of (u, v)
            let n = g.node_count();
            if n < 3 { return Ok(()); }
            for (u, z, _) in g.edges().take(3) {
                for v in 0..n {
                    if v == u || v == z || g.has_edge(u, v) || g.has_edge(z, v) { continue; }
                    let mut h = g.clone();
                    h.add_edge(z, v, 1.0).unwrap();
                    for kind in [PredictorKind::CommonNeighbors, PredictorKind::AdamicAdar] {
                        let before = score(&g, u, v, kind).unwrap();
                        let after = score(&h, u, v, kind).unwrap();
                        prop_assert!(after > before);
                    }
                }
            }
        }
    }
}
