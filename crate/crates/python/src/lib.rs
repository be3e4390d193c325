//! Python module `edgeboost`.

use edgeboost::community::{self, DetectorKind};
use edgeboost::linkpred::{self, PredictorKind};
use edgeboost::{benchgen, boost as pipeline, datasets, io, metrics, BenchmarkSpec, BoostConfig, DeletionSpec, Error};
use pyo3::exceptions::{PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

/// Undirected weighted graph on nodes `0..n`.
#[pyclass(name = "Graph", module = "edgeboost", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph(edgeboost::Graph);

#[pymethods]
impl PyGraph {
    /// `edges` holds `(u, v)` or `(u, v, weight)` tuples.
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<Vec<f64>>) -> PyResult<Self> {
        let mut triples = Vec::with_capacity(edges.len());
        for e in edges {
            let (u, v, w) = match e[..] {
                [u, v] => (u, v, 1.0),
                [u, v, w] => (u, v, w),
                _ => return Err(PyValueError::new_err("edges must be (u, v) or (u, v, weight)")),
            };
            if u < 0.0 || v < 0.0 || u.fract() != 0.0 || v.fract() != 0.0 {
                return Err(PyValueError::new_err(format!("bad node ids ({u}, {v})")));
            }
            triples.push((u as usize, v as usize, w));
        }
        edgeboost::Graph::from_weighted_edges(n, triples).map(Self).map_err(err)
    }

    /// Reads an edge-list file. Returns the graph and the node labels by id.
    #[staticmethod]
    fn read_edge_list(path: &str) -> PyResult<(Self, Vec<String>)> {
        let lg = io::read_edge_list_path(path).map_err(err)?;
        let names = (0..lg.labels.len()).map(|i| lg.labels.name(i).to_owned()).collect();
        Ok((Self(lg.graph), names))
    }

    fn write_edge_list(&self, path: &str) -> PyResult<()> {
        io::write_edge_list_path(path, &self.0, &io::NodeLabels::identity(self.0.node_count())).map_err(err)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn degree(&self, u: usize) -> PyResult<usize> {
        self.check(u)?;
        Ok(self.0.degree(u))
    }

    fn neighbors(&self, u: usize) -> PyResult<Vec<usize>> {
        self.check(u)?;
        Ok(self.0.neighbors(u).collect())
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.0.node_count() && v < self.0.node_count() && self.0.has_edge(u, v)
    }

    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.0.edges().collect()
    }

    /// Copy with `round(delta * |E|)` edges removed uniformly at random.
    #[pyo3(signature = (delta, seed = 0))]
    fn delete_edges_random(&self, delta: f64, seed: u64) -> PyResult<Self> {
        let spec = DeletionSpec::new(delta, seed).map_err(err)?;
        self.0.delete_edges_random(&spec).map(Self).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.node_count()
    }

    fn __repr__(&self) -> String {
        format!("Graph(nodes={}, edges={})", self.0.node_count(), self.0.edge_count())
    }
}

impl PyGraph {
    fn check(&self, u: usize) -> PyResult<()> {
        if u >= self.0.node_count() {
            return Err(PyIndexError::new_err(format!("node {u} out of range")));
        }
        Ok(())
    }
}

/// Assignment of every node to one community; ids are dense from 0.
#[pyclass(name = "Partition", module = "edgeboost", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPartition(edgeboost::Partition);

#[pymethods]
impl PyPartition {
    /// Arbitrary integer labels, one per node; relabelled in order of first
    /// appearance.
    #[new]
    fn new(labels: Vec<i64>) -> Self {
        Self(edgeboost::Partition::from_labels(&labels))
    }

    #[getter]
    fn labels(&self) -> Vec<usize> {
        self.0.labels().to_vec()
    }

    #[getter]
    fn community_count(&self) -> usize {
        self.0.community_count()
    }

    fn communities(&self) -> Vec<Vec<usize>> {
        self.0.communities()
    }

    fn sizes(&self) -> Vec<usize> {
        self.0.sizes()
    }

    fn write(&self, path: &str) -> PyResult<()> {
        io::write_partition_path(path, &self.0, &io::NodeLabels::identity(self.0.node_count())).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.node_count()
    }

    fn __repr__(&self) -> String {
        format!("Partition(nodes={}, communities={})", self.0.node_count(), self.0.community_count())
    }
}

#[pyclass(name = "BoostResult", module = "edgeboost", frozen, get_all)]
struct PyBoostResult {
    partition: PyPartition,
    tau: f64,
    score: f64,
    /// `(tau, n_components, score)` for every threshold.
    per_tau: Vec<(f64, usize, f64)>,
    ensemble: Vec<PyPartition>,
    degraded: bool,
}

#[pymethods]
impl PyBoostResult {
    fn __repr__(&self) -> String {
        format!(
            "BoostResult(tau={}, score={:.4}, communities={})",
            self.tau,
            self.score,
            self.partition.0.community_count()
        )
    }
}

/// Planted-partition benchmark. Returns `(graph, truth)`; `delta` edges are
/// deleted after generation.
#[pyfunction]
#[pyo3(signature = (
    n_nodes = 1000, mu = 0.1, delta = 0.0, seed = 1, avg_degree = 10.0, max_degree = 50,
    degree_exponent = -2.0, community_exponent = -1.0, min_community = 10, max_community = 50,
))]
#[allow(clippy::too_many_arguments)]
fn generate_benchmark(
    py: Python<'_>,
    n_nodes: usize,
    mu: f64,
    delta: f64,
    seed: u64,
    avg_degree: f64,
    max_degree: usize,
    degree_exponent: f64,
    community_exponent: f64,
    min_community: usize,
    max_community: usize,
) -> PyResult<(PyGraph, PyPartition)> {
    let spec = BenchmarkSpec {
        n_nodes,
        avg_degree,
        max_degree,
        degree_exponent,
        community_exponent,
        min_community,
        max_community,
        mu,
        delta,
        seed,
    };
    let net = py.detach(|| benchgen::generate_incomplete(&spec)).map_err(err)?;
    Ok((PyGraph(net.graph), PyPartition(net.truth)))
}

/// Zachary's karate club with its two-faction split.
#[pyfunction]
fn karate() -> (PyGraph, PyPartition) {
    let net = datasets::karate();
    (PyGraph(net.graph), PyPartition(net.truth))
}

/// Scores every non-adjacent pair with a common neighbor, best first.
#[pyfunction]
#[pyo3(signature = (graph, predictor = "jaccard"))]
fn score_all(graph: &PyGraph, predictor: &str) -> PyResult<Vec<(usize, usize, f64)>> {
    let kind: PredictorKind = parse(predictor)?;
    let scored = linkpred::score_all(&graph.0, kind);
    Ok(scored.entries().iter().map(|e| (e.u, e.v, e.score)).collect())
}

/// Fraction of the top `k_fraction * original_edges` candidates that join
/// nodes of the same true community.
#[pyfunction]
#[pyo3(signature = (graph, truth, k_fraction, original_edges, predictor = "jaccard"))]
fn intra_edge_precision(
    graph: &PyGraph,
    truth: &PyPartition,
    k_fraction: f64,
    original_edges: usize,
    predictor: &str,
) -> PyResult<f64> {
    let scored = linkpred::score_all(&graph.0, parse(predictor)?);
    linkpred::intra_edge_precision(&scored, &truth.0, k_fraction, original_edges).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (graph, seed = 0))]
fn louvain(graph: &PyGraph, seed: u64) -> PyPartition {
    PyPartition(community::louvain(&graph.0, seed))
}

#[pyfunction]
#[pyo3(signature = (graph, seed = 0))]
fn label_propagation(graph: &PyGraph, seed: u64) -> PyPartition {
    PyPartition(community::label_propagation(&graph.0, seed))
}

#[pyfunction]
fn modularity(graph: &PyGraph, partition: &PyPartition) -> PyResult<f64> {
    community::modularity(&graph.0, &partition.0).map_err(err)
}

#[pyfunction]
fn nmi(inferred: &PyPartition, truth: &PyPartition) -> PyResult<f64> {
    metrics::nmi(&inferred.0, &truth.0).map_err(err)
}

#[pyfunction]
fn relative_error(inferred: &PyPartition, truth: &PyPartition) -> PyResult<f64> {
    metrics::relative_error(&inferred.0, &truth.0).map_err(err)
}

/// Runs the full pipeline: impute, cluster `iterations` times, aggregate.
#[pyfunction]
#[pyo3(signature = (graph, detector = "louvain", predictor = "jaccard", iterations = 50, seed = 0, tau = None))]
fn boost(
    py: Python<'_>,
    graph: &PyGraph,
    detector: &str,
    predictor: &str,
    iterations: usize,
    seed: u64,
    tau: Option<f64>,
) -> PyResult<PyBoostResult> {
    let cfg = BoostConfig::new(parse::<DetectorKind>(detector)?)
        .with_predictor(parse(predictor)?)
        .with_iterations(iterations)
        .with_seed(seed)
        .with_fixed_tau(tau);
    let g = &graph.0;
    let out = py.detach(|| pipeline::run(g, &cfg)).map_err(err)?;
    Ok(PyBoostResult {
        partition: PyPartition(out.consensus.partition),
        tau: out.consensus.tau,
        score: out.consensus.score,
        per_tau: out
            .consensus
            .per_tau
            .iter()
            .map(|t| (t.tau, t.n_components, t.score))
            .collect(),
        ensemble: out.ensemble.into_iter().map(PyPartition).collect(),
        degraded: out.diagnostics.degraded,
    })
}

#[pymodule]
#[pyo3(name = "edgeboost")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyPartition>()?;
    m.add_class::<PyBoostResult>()?;
    m.add_function(wrap_pyfunction!(generate_benchmark, m)?)?;
    m.add_function(wrap_pyfunction!(karate, m)?)?;
    m.add_function(wrap_pyfunction!(score_all, m)?)?;
    m.add_function(wrap_pyfunction!(intra_edge_precision, m)?)?;
    m.add_function(wrap_pyfunction!(louvain, m)?)?;
    m.add_function(wrap_pyfunction!(label_propagation, m)?)?;
    m.add_function(wrap_pyfunction!(modularity, m)?)?;
    m.add_function(wrap_pyfunction!(nmi, m)?)?;
    m.add_function(wrap_pyfunction!(relative_error, m)?)?;
    m.add_function(wrap_pyfunction!(boost, m)?)?;
    Ok(())
}
