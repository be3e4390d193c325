//! Community detection on incomplete networks via link-prediction imputation
//! and consensus clustering.
//!
//! The pipeline scores candidate missing edges with a neighborhood link
//! predictor, samples imputed versions of the input network from the induced
//! edge distribution, clusters every imputed network with a pluggable
//! detector and finally aggregates the ensemble through a thresholded
//! co-community network.
//!
//! ```
//! use edgeboost::{boost, BoostConfig, DetectorKind, Graph};
//!
//! let mut g = Graph::new(6);
//! for (u, v) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)] {
//!     g.add_edge(u, v, 1.0).unwrap();
//! }
//! let cfg = BoostConfig::new(DetectorKind::Louvain).with_iterations(10);
//! let outcome = boost::run(&g, &cfg).unwrap();
//! assert_eq!(outcome.consensus.partition.node_count(), 6);
//! ```

pub mod benchgen;
pub mod boost;
pub mod community;
pub mod consensus;
pub mod datasets;
mod error;
pub mod graph;
pub mod imputation;
pub mod io;
pub mod linkpred;
pub mod metrics;
mod partition;
pub mod rng;
mod union_find;

pub use benchgen::{BenchmarkSpec, PlantedNetwork};
pub use boost::{BoostConfig, BoostDiagnostics, BoostOutcome};
pub use community::{CommunityDetector, DetectorKind, ExternalDetector};
pub use consensus::{CoCommunityNetwork, ConsensusResult, TauScore};
pub use error::{Error, Result};
pub use graph::{DeletionSpec, Graph};
pub use imputation::EdgeDistribution;
pub use linkpred::{PredictorKind, ScoredEdge, ScoredEdgeSet};
pub use metrics::EvalReport;
pub use partition::Partition;
