//! Text formats.
//!
//! Edge lists hold one edge per line, `u<TAB>v` or `u<TAB>v<TAB>weight`.
//! Node labels are arbitrary tokens mapped to dense ids in order of first
//! appearance. A line with a single token declares a node without edges, so
//! isolated nodes survive a write/read round trip. Blank lines and lines
//! starting with `#` are skipped. Fields are split on tabs, or on any
//! whitespace when a line has no tab.
//!
//! Partition files hold `label<TAB>community` lines, one per node.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::{Error, Graph, Partition, Result, TauScore};

/// Bidirectional map between node labels and dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeLabels {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl NodeLabels {
    /// Labels `"0"`, `"1"`, ..., `"n-1"`.
    pub fn identity(n: usize) -> Self {
        let mut labels = Self::default();
        for i in 0..n {
            labels.intern(&i.to_string());
        }
        labels
    }

    fn intern(&mut self, name: &str) -> usize {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: NodeLabels,
}

fn fields(line: &str) -> Vec<&str> {
    if line.contains('\t') {
        line.split('\t').map(str::trim).filter(|f| !f.is_empty()).collect()
    } else {
        line.split_whitespace().collect()
    }
}

fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e.into())),
        Ok(line) => {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                None
            } else {
                Some(Ok((i + 1, t.to_owned())))
            }
        }
    })
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<LabeledGraph> {
    let mut labels = NodeLabels::default();
    let mut edges = Vec::new();
    for item in content_lines(reader) {
        let (line, text) = item?;
        let parse_err = |message: String| Error::Parse { line, message };
        let f = fields(&text);
        match f.len() {
            1 => {
                labels.intern(f[0]);
            }
            2 | 3 => {
                if f[0] == f[1] {
                    return Err(parse_err(format!("self-loop on node {}", f[0])));
                }
                let w = match f.get(2) {
                    None => 1.0,
                    Some(s) => match s.parse::<f64>() {
                        Ok(w) if w.is_finite() && w > 0.0 => w,
                        _ => return Err(parse_err(format!("invalid weight {s:?}"))),
                    },
                };
                let u = labels.intern(f[0]);
                let v = labels.intern(f[1]);
                edges.push((u, v, w));
            }
            n => return Err(parse_err(format!("expected 1 to 3 fields, found {n}"))),
        }
    }
    let graph = Graph::from_weighted_edges(labels.len(), edges)?;
    Ok(LabeledGraph { graph, labels })
}

/// Writes every edge once (`u < v`), the weight column only when some edge
/// has a weight other than 1, and a single-token line for each isolated node.
pub fn write_edge_list<W: Write>(mut w: W, g: &Graph, labels: &NodeLabels) -> Result<()> {
    check_labels(g.node_count(), labels)?;
    let weighted = g.edges().any(|(_, _, wt)| wt != 1.0);
    for (u, v, wt) in g.edges() {
        if weighted {
            writeln!(w, "{}\t{}\t{}", labels.name(u), labels.name(v), wt)?;
        } else {
            writeln!(w, "{}\t{}", labels.name(u), labels.name(v))?;
        }
    }
    for v in (0..g.node_count()).filter(|&v| g.degree(v) == 0) {
        writeln!(w, "{}", labels.name(v))?;
    }
    w.flush()?;
    Ok(())
}

fn check_labels(n: usize, labels: &NodeLabels) -> Result<()> {
    if labels.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} labels for {} nodes",
            labels.len(),
            n
        )));
    }
    Ok(())
}

/// Reads a partition over the nodes named in `labels`. Every node must
/// appear exactly once; community tokens are arbitrary.
pub fn read_partition<R: BufRead>(reader: R, labels: &NodeLabels) -> Result<Partition> {
    let mut assigned: Vec<Option<usize>> = vec![None; labels.len()];
    let mut communities: HashMap<String, usize> = HashMap::new();
    for item in content_lines(reader) {
        let (line, text) = item?;
        let parse_err = |message: String| Error::Parse { line, message };
        let f = fields(&text);
        if f.len() != 2 {
            return Err(parse_err(format!("expected 2 fields, found {}", f.len())));
        }
        let node = labels
            .id(f[0])
            .ok_or_else(|| parse_err(format!("unknown node {:?}", f[0])))?;
        if assigned[node].is_some() {
            return Err(parse_err(format!("node {:?} listed twice", f[0])));
        }
        let next = communities.len();
        assigned[node] = Some(*communities.entry(f[1].to_owned()).or_insert(next));
    }
    let mut out = Vec::with_capacity(assigned.len());
    for (v, c) in assigned.into_iter().enumerate() {
        match c {
            Some(c) => out.push(c),
            None => {
                return Err(Error::InvalidArgument(format!(
                    "node {:?} has no community",
                    labels.name(v)
                )))
            }
        }
    }
    Ok(Partition::from_labels(&out))
}

/// Reads a partition file on its own, taking the node labels from its first
/// column in order of appearance.
pub fn read_labeled_partition<R: BufRead>(reader: R) -> Result<(NodeLabels, Partition)> {
    let mut labels = NodeLabels::default();
    let mut communities: HashMap<String, usize> = HashMap::new();
    let mut assignment = Vec::new();
    for item in content_lines(reader) {
        let (line, text) = item?;
        let f = fields(&text);
        if f.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, found {}", f.len()),
            });
        }
        if labels.id(f[0]).is_some() {
            return Err(Error::Parse {
                line,
                message: format!("node {:?} listed twice", f[0]),
            });
        }
        labels.intern(f[0]);
        let next = communities.len();
        assignment.push(*communities.entry(f[1].to_owned()).or_insert(next));
    }
    Ok((labels, Partition::from_labels(&assignment)))
}

pub fn write_partition<W: Write>(mut w: W, p: &Partition, labels: &NodeLabels) -> Result<()> {
    check_labels(p.node_count(), labels)?;
    for (v, &c) in p.labels().iter().enumerate() {
        writeln!(w, "{}\t{}", labels.name(v), c)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-threshold consensus scores as `tau,n_components,score` CSV.
pub fn write_tau_scores<W: Write>(mut w: W, scores: &[TauScore]) -> Result<()> {
    writeln!(w, "tau,n_components,score")?;
    for s in scores {
        writeln!(w, "{},{},{}", s.tau, s.n_components, s.score)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_edge_list_path(path: impl AsRef<Path>) -> Result<LabeledGraph> {
    read_edge_list(BufReader::new(File::open(path)?))
}

pub fn write_edge_list_path(path: impl AsRef<Path>, g: &Graph, labels: &NodeLabels) -> Result<()> {
    write_edge_list(BufWriter::new(File::create(path)?), g, labels)
}

pub fn read_partition_path(path: impl AsRef<Path>, labels: &NodeLabels) -> Result<Partition> {
    read_partition(BufReader::new(File::open(path)?), labels)
}

pub fn read_labeled_partition_path(path: impl AsRef<Path>) -> Result<(NodeLabels, Partition)> {
    read_labeled_partition(BufReader::new(File::open(path)?))
}

pub fn write_partition_path(path: impl AsRef<Path>, p: &Partition, labels: &NodeLabels) -> Result<()> {
    write_partition(BufWriter::new(File::create(path)?), p, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(s: &str) -> Result<LabeledGraph> {
        read_edge_list(s.as_bytes())
    }

    #[test]
    fn parses_labels_weights_and_comments() {
        let lg = read("# header\nb\ta\n\na c 2.5\nd\n").unwrap();
        assert_eq!(lg.graph.node_count(), 4);
        assert_eq!(lg.labels.id("b"), Some(0));
        assert_eq!(lg.labels.name(3), "d");
        assert_eq!(lg.graph.weight(1, 2), Some(2.5));
        assert_eq!(lg.graph.weight(0, 1), Some(1.0));
        assert_eq!(lg.graph.degree(3), 0);
    }

    #[test]
    fn reports_line_numbers() {
        match read("0\t1\n2\t2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(read("0\t1\t-1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read("0 1 2 3\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 3)]).unwrap();
        let labels = NodeLabels::identity(5);
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g, &labels).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "0\t1\n0\t3\n1\t2\n4\n");
        let back = read_edge_list(buf.as_slice()).unwrap();
        assert_eq!(back.graph.edge_count(), 3);
        assert_eq!(back.graph.node_count(), 5);
    }

    #[test]
    fn partition_round_trip_and_errors() {
        let labels = read("x\ty\ny\tz\n").unwrap().labels;
        let p = read_partition("z\tB\nx\tA\ny\tA\n".as_bytes(), &labels).unwrap();
        assert_eq!(p.labels(), &[0, 0, 1]);
        let mut buf = Vec::new();
        write_partition(&mut buf, &p, &labels).unwrap();
        assert_eq!(read_partition(buf.as_slice(), &labels).unwrap(), p);

        assert!(read_partition("x\tA\ny\tA\n".as_bytes(), &labels).is_err());
        let (own, q) = read_labeled_partition("z\tB\nx\tA\ny\tA\n".as_bytes()).unwrap();
        assert_eq!(own.name(0), "z");
        assert_eq!(q.labels(), &[0, 1, 1]);
        assert!(read_labeled_partition("z\tB\nz\tA\n".as_bytes()).is_err());
        assert!(matches!(
            read_partition("x\tA\nx\tB\n".as_bytes(), &labels),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_partition("w\tA\n".as_bytes(), &labels),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn tau_csv() {
        let mut buf = Vec::new();
        let rows = [TauScore {
            tau: 0.5,
            n_components: 2,
            score: 0.75,
        }];
        write_tau_scores(&mut buf, &rows).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "tau,n_components,score\n0.5,2,0.75\n");
    }
}
