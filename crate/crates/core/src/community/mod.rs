//! Community detection: the detector interface, the native detectors and
//! Newman-Girvan modularity.

mod external;
mod label_propagation;
mod louvain;

use std::fmt;
use std::str::FromStr;

pub use external::ExternalDetector;
pub use label_propagation::{label_propagation, label_propagation_with_cap, DEFAULT_MAX_SWEEPS};
pub use louvain::louvain;

use crate::{Error, Graph, Partition, Result};

/// Anything that maps a graph and a seed to a partition of its nodes.
///
/// Implementations must be deterministic for a fixed `(graph, seed)` and
/// must return a partition that is total over the graph's nodes.
pub trait CommunityDetector: fmt::Debug + Send + Sync {
    fn name(&self) -> String;

    fn detect(&self, g: &Graph, seed: u64) -> Result<Partition>;
}

/// The natively implemented detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    Louvain,
    LabelPropagation,
}

impl DetectorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DetectorKind::Louvain => "louvain",
            DetectorKind::LabelPropagation => "label-propagation",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "louvain" => Ok(DetectorKind::Louvain),
            "label-propagation" | "labelpropagation" | "lpa" | "lp" => {
                Ok(DetectorKind::LabelPropagation)
            }
            other => Err(Error::Config(format!("unknown detector `{other}`"))),
        }
    }
}

impl CommunityDetector for DetectorKind {
    fn name(&self) -> String {
        self.as_str().to_owned()
    }

    fn detect(&self, g: &Graph, seed: u64) -> Result<Partition> {
        Ok(detect(g, *self, seed))
    }
}

/// Runs the selected native detector. The result is canonically labeled.
pub fn detect(g: &Graph, kind: DetectorKind, seed: u64) -> Partition {
    match kind {
        DetectorKind::Louvain => louvain(g, seed),
        DetectorKind::LabelPropagation => label_propagation(g, seed),
    }
}

/// Weighted modularity `Q = sum_c [ in_c / W - (tot_c / 2W)^2 ]`, where `in_c`
/// is the weight of edges inside `c`, `tot_c` the total strength of `c` and
/// `W` the total edge weight.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if p.node_count() != g.node_count() {
        return Err(Error::InvalidArgument(format!(
            "partition covers {} nodes, graph has {}",
            p.node_count(),
            g.node_count()
        )));
    }
    let total = g.total_weight();
    if g.edge_count() == 0 || total <= 0.0 {
        return Err(Error::EmptyInput("modularity of an edgeless graph"));
    }
    let k = p.community_count();
    let mut inside = vec![0.0; k];
    let mut strength = vec![0.0; k];
    for (u, v, w) in g.edges() {
        let (cu, cv) = (p.community_of(u), p.community_of(v));
        if cu == cv {
            inside[cu] += w;
        }
        strength[cu] += w;
        strength[cv] += w;
    }
    Ok(inside
        .iter()
        .zip(&strength)
        .map(|(&i, &s)| i / total - (s / (2.0 * total)).powi(2))
        .sum())
}
