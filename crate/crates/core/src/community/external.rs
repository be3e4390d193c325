//! Detectors provided by external executables.
//!
//! The executable receives the graph on standard input in edge-list form
//! (`u<TAB>v` per edge, a lone `u` for an isolated node, ids are the dense
//! node ids) and the seed in the `EDGEBOOST_SEED` environment variable. It
//! must print `node<TAB>community` lines on standard output; community labels
//! are arbitrary strings. Nodes it does not mention become singletons.

use std::collections::HashMap;
use std::io::Write;
use std::process::{Command, Stdio};

use super::CommunityDetector;
use crate::{Error, Graph, Partition, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalDetector {
    program: String,
    args: Vec<String>,
}

impl ExternalDetector {
    pub fn new(program: impl Into<String>, args: Vec<String>) -> Self {
        Self {
            program: program.into(),
            args,
        }
    }

    /// Splits a command line on whitespace into program and arguments.
    pub fn from_command_line(cmd: &str) -> Result<Self> {
        let mut parts = cmd.split_whitespace().map(str::to_owned);
        let program = parts
            .next()
            .ok_or_else(|| Error::Config("empty detector command".into()))?;
        Ok(Self::new(program, parts.collect()))
    }
}

impl CommunityDetector for ExternalDetector {
    fn name(&self) -> String {
        std::iter::once(self.program.as_str())
            .chain(self.args.iter().map(String::as_str))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn detect(&self, g: &Graph, seed: u64) -> Result<Partition> {
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .env("EDGEBOOST_SEED", seed.to_string())
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| Error::Detector(format!("cannot start `{}`: {e}", self.program)))?;

        let mut input = String::new();
        for v in 0..g.node_count() {
            if g.degree(v) == 0 {
                input.push_str(&format!("{v}\n"));
            }
        }
        for (u, v, _) in g.edges() {
            input.push_str(&format!("{u}\t{v}\n"));
        }
        let mut stdin = child.stdin.take().expect("stdin is piped");
        let writer = std::thread::spawn(move || stdin.write_all(input.as_bytes()));
        let output = child
            .wait_with_output()
            .map_err(|e| Error::Detector(e.to_string()))?;
        // a detector may exit without draining its input
        let _ = writer.join();
        if !output.status.success() {
            return Err(Error::Detector(format!(
                "`{}` exited with {}: {}",
                self.program,
                output.status,
                String::from_utf8_lossy(&output.stderr).trim()
            )));
        }
        parse_assignment(g.node_count(), &String::from_utf8_lossy(&output.stdout))
    }
}

fn parse_assignment(n: usize, text: &str) -> Result<Partition> {
    // unlisted nodes keep a private label past the end of the string labels
    let mut labels: Vec<usize> = (0..n).map(|v| usize::MAX - v).collect();
    let mut names: HashMap<&str, usize> = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(node), Some(comm), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Detector(format!(
                "output line {}: expected `node<TAB>community`",
                i + 1
            )));
        };
        let node: usize = node.trim().parse().map_err(|_| {
            Error::Detector(format!("output line {}: bad node id `{node}`", i + 1))
        })?;
        if node >= n {
            return Err(Error::Detector(format!(
                "output line {}: node {node} out of range",
                i + 1
            )));
        }
        let next = names.len();
        labels[node] = *names.entry(comm.trim()).or_insert(next);
    }
    Ok(Partition::from_labels(&labels))
}
