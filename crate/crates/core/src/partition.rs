use std::collections::HashMap;
use std::hash::Hash;

use crate::{Error, Result};

/// A disjoint, total assignment of nodes `0..n` to communities.
///
/// Labels are always canonical: community ids are contiguous from 0 and are
/// assigned in order of first appearance by node id. Two partitions that
/// differ only by a renaming of their communities therefore compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    n_communities: usize,
}

impl Partition {
    /// Canonicalizes an arbitrary labeling.
    pub fn from_labels<L: Eq + Hash + Copy>(labels: &[L]) -> Self {
        let mut map: HashMap<L, usize> = HashMap::with_capacity(labels.len().min(1024));
        let canonical = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Self {
            labels: canonical,
            n_communities: map.len(),
        }
    }

    /// Builds a partition from explicit member lists. Every node in
    /// `0..node_count` must appear exactly once.
    pub fn from_communities(node_count: usize, communities: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; node_count];
        for (c, members) in communities.iter().enumerate() {
            for &v in members {
                if v >= node_count {
                    return Err(Error::NodeOutOfRange { node: v, node_count });
                }
                if labels[v] != usize::MAX {
                    return Err(Error::InvalidArgument(format!(
                        "node {v} assigned to more than one community"
                    )));
                }
                labels[v] = c;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidArgument(format!(
                "node {v} is not assigned to any community"
            )));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn singletons(node_count: usize) -> Self {
        Self {
            labels: (0..node_count).collect(),
            n_communities: node_count,
        }
    }

    pub fn single_community(node_count: usize) -> Self {
        Self {
            labels: vec![0; node_count],
            n_communities: usize::from(node_count > 0),
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn community_count(&self) -> usize {
        self.n_communities
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn same_community(&self, u: usize, v: usize) -> bool {
        self.labels[u] == self.labels[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_communities];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Member lists indexed by community id; members are in ascending order.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_communities];
        for (v, &l) in self.labels.iter().enumerate() {
            out[l].push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_labels_follow_first_appearance() {
        let p = Partition::from_labels(&[7, 7, 3, 9, 3]);
        assert_eq!(p.labels(), &[0, 0, 1, 2, 1]);
        assert_eq!(p.community_count(), 3);
        assert_eq!(p.sizes(), vec![2, 2, 1]);
    }

    #[test]
    fn relabeled_partitions_are_equal() {
        let a = Partition::from_labels(&[1, 1, 0, 0]);
        let b = Partition::from_labels(&["x", "x", "y", "y"]);
        assert_eq!(a, b);
    }

    #[test]
    fn from_communities_rejects_overlap_and_gaps() {
        assert!(Partition::from_communities(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_communities(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_communities(3, &[vec![0, 3]]).is_err());
        let p = Partition::from_communities(3, &[vec![2], vec![0, 1]]).unwrap();
        assert_eq!(p.labels(), &[0, 0, 1]);
    }

    #[test]
    fn empty_partition() {
        let p = Partition::single_community(0);
        assert_eq!(p.community_count(), 0);
        assert_eq!(Partition::singletons(0), p);
    }
}
