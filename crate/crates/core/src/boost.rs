//! The end-to-end boosting pipeline.
//!
//! 1. score candidate missing edges with the configured link predictor;
//! 2. turn the scores into an edge distribution;
//! 3. for each of `n_iterations` rounds, sample `k ~ U(1, |E|)` edges, add
//!    them to the input graph and run the detector on the result;
//! 4. aggregate the ensemble through the co-community network.
//!
//! Round `i` draws all of its randomness from stream `i` of the master seed,
//! so rounds can run on any number of threads in any order and still produce
//! the same ensemble.

use std::fmt;
use std::sync::Arc;

use rand::Rng as _;
use rayon::prelude::*;

use crate::community::{CommunityDetector, DetectorKind};
use crate::consensus::{self, CoCommunityNetwork, ConsensusResult};
use crate::imputation::{impute, EdgeDistribution};
use crate::linkpred::{score_all, PredictorKind};
use crate::{rng, Error, Graph, Partition, Result};

pub const DEFAULT_ITERATIONS: usize = 50;

#[derive(Clone)]
pub struct BoostConfig {
    pub predictor: PredictorKind,
    pub detector: Arc<dyn CommunityDetector>,
    pub n_iterations: usize,
    pub master_seed: u64,
    /// Sample exactly this many edges per round instead of `k ~ U(1, |E|)`.
    pub fixed_k: Option<usize>,
    /// Prune at this threshold instead of selecting one by score. Rounded
    /// up to the next multiple of `1 / n_iterations`.
    pub fixed_tau: Option<f64>,
}

impl fmt::Debug for BoostConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoostConfig")
            .field("predictor", &self.predictor)
            .field("detector", &self.detector.name())
            .field("n_iterations", &self.n_iterations)
            .field("master_seed", &self.master_seed)
            .field("fixed_k", &self.fixed_k)
            .field("fixed_tau", &self.fixed_tau)
            .finish()
    }
}

impl BoostConfig {
    pub fn new(detector: DetectorKind) -> Self {
        Self::with_detector(Arc::new(detector))
    }

    pub fn with_detector(detector: Arc<dyn CommunityDetector>) -> Self {
        Self {
            predictor: PredictorKind::Jaccard,
            detector,
            n_iterations: DEFAULT_ITERATIONS,
            master_seed: 0,
            fixed_k: None,
            fixed_tau: None,
        }
    }

    pub fn with_predictor(mut self, predictor: PredictorKind) -> Self {
        self.predictor = predictor;
        self
    }

    pub fn with_iterations(mut self, n: usize) -> Self {
        self.n_iterations = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_fixed_k(mut self, k: Option<usize>) -> Self {
        self.fixed_k = k;
        self
    }

    pub fn with_fixed_tau(mut self, tau: Option<f64>) -> Self {
        self.fixed_tau = tau;
        self
    }
}

/// Per-round record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationRecord {
    /// Requested sample size.
    pub k: usize,
    /// Edges actually added (smaller than `k` when the pool runs out).
    pub added: usize,
    pub n_communities: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoostDiagnostics {
    /// No candidate edges existed; every round clustered the input graph.
    pub degraded: bool,
    pub candidate_count: usize,
    pub iterations: Vec<IterationRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoostOutcome {
    pub consensus: ConsensusResult,
    pub diagnostics: BoostDiagnostics,
    pub ensemble: Vec<Partition>,
}

impl BoostOutcome {
    pub fn partition(&self) -> &Partition {
        &self.consensus.partition
    }
}

pub fn run(g: &Graph, cfg: &BoostConfig) -> Result<BoostOutcome> {
    if g.node_count() == 0 {
        return Err(Error::InvalidArgument("input graph has no nodes".into()));
    }
    if cfg.n_iterations == 0 {
        return Err(Error::InvalidArgument("n_iterations must be at least 1".into()));
    }
    if let Some(tau) = cfg.fixed_tau {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::InvalidArgument(format!("tau {tau} outside (0, 1]")));
        }
    }
    let scored = score_all(g, cfg.predictor);
    let distribution = match EdgeDistribution::from_scored(&scored) {
        Ok(d) => Some(d),
        Err(Error::EmptyInput(_)) => None,
        Err(e) => return Err(e),
    };

    let rounds: Vec<(IterationRecord, Partition)> = (0..cfg.n_iterations)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(cfg.master_seed, i as u64);
            let detector_seed: u64 = rng.random();
            let (added, k) = match &distribution {
                Some(d) => match cfg.fixed_k {
                    Some(k) => (d.sample_exact(k, &mut rng), k),
                    None => d.sample_k(g.edge_count(), &mut rng),
                },
                None => (Vec::new(), 0),
            };
            let imputed = impute(g, &added)?;
            let p = cfg.detector.detect(&imputed, detector_seed)?;
            if p.node_count() != g.node_count() {
                return Err(Error::Detector(format!(
                    "detector returned {} nodes for a {}-node graph",
                    p.node_count(),
                    g.node_count()
                )));
            }
            let record = IterationRecord {
                k,
                added: added.len(),
                n_communities: p.community_count(),
            };
            Ok((record, p))
        })
        .collect::<Result<_>>()?;
    let (iterations, ensemble): (Vec<_>, Vec<_>) = rounds.into_iter().unzip();

    let gcc = CoCommunityNetwork::build(g.node_count(), &ensemble)?;
    let consensus = match cfg.fixed_tau {
        None => consensus::aggregate(&gcc),
        Some(tau) => consensus::aggregate_at(&gcc, tau),
    };
    Ok(BoostOutcome {
        consensus,
        diagnostics: BoostDiagnostics {
            degraded: distribution.is_none(),
            candidate_count: scored.len(),
            iterations,
        },
        ensemble,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::label_propagation;

    fn cliques_joined(k: usize) -> Graph {
        let mut edges = Vec::new();
        for off in [0, k] {
            for u in 0..k {
                for v in u + 1..k {
                    edges.push((u + off, v + off));
                }
            }
        }
        edges.push((k - 1, k));
        Graph::from_edges(2 * k, edges).unwrap()
    }

    #[test]
    fn complete_graph_is_one_community() {
        let edges = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v)));
        let g = Graph::from_edges(5, edges).unwrap();
        for det in [DetectorKind::Louvain, DetectorKind::LabelPropagation] {
            let out = run(&g, &BoostConfig::new(det).with_iterations(5)).unwrap();
            assert!(out.diagnostics.degraded);
            assert_eq!(out.partition().community_count(), 1);
        }
    }

    #[test]
    fn joined_cliques_recovered() {
        let g = cliques_joined(5);
        for seed in 0..5 {
            let cfg = BoostConfig::new(DetectorKind::Louvain)
                .with_iterations(10)
                .with_seed(seed);
            let out = run(&g, &cfg).unwrap();
            assert_eq!(out.partition().labels(), &[0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
            assert_eq!(out.ensemble.len(), 10);
            assert_eq!(out.diagnostics.iterations.len(), 10);
        }
    }

    #[test]
    fn single_iteration_returns_the_detected_partition() {
        let g = Graph::from_edges(
            9,
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (0, 2), (6, 8)],
        )
        .unwrap();
        let cfg = BoostConfig::new(DetectorKind::LabelPropagation)
            .with_iterations(1)
            .with_seed(3);
        let out = run(&g, &cfg).unwrap();
        assert_eq!(out.partition(), &out.ensemble[0]);
        assert_eq!(out.consensus.tau, 1.0);

        // the ensemble member is the detector on the imputed graph of round 0
        let mut rng = rng::stream(3, 0);
        let det_seed: u64 = rng.random();
        let scored = score_all(&g, PredictorKind::Jaccard);
        let d = EdgeDistribution::from_scored(&scored).unwrap();
        let (added, _) = d.sample_k(g.edge_count(), &mut rng);
        let expected = label_propagation(&impute(&g, &added).unwrap(), det_seed);
        assert_eq!(out.ensemble[0], expected);
    }

    #[test]
    fn rejects_bad_configs() {
        let g = cliques_joined(3);
        assert!(run(&g, &BoostConfig::new(DetectorKind::Louvain).with_iterations(0)).is_err());
        assert!(run(&Graph::new(0), &BoostConfig::new(DetectorKind::Louvain)).is_err());
        let cfg = BoostConfig::new(DetectorKind::Louvain).with_fixed_tau(Some(0.0));
        assert!(run(&g, &cfg).is_err());
    }

    #[test]
    fn fixed_k_and_tau_are_honored() {
        let g = cliques_joined(4);
        let cfg = BoostConfig::new(DetectorKind::Louvain)
            .with_iterations(4)
            .with_fixed_k(Some(2))
            .with_fixed_tau(Some(0.5));
        let out = run(&g, &cfg).unwrap();
        assert!(out.diagnostics.iterations.iter().all(|r| r.k == 2 && r.added == 2));
        assert_eq!(out.consensus.tau, 0.5);
    }
}
