//! Partition comparison: normalized mutual information and relative error
//! in the number of communities.

use std::collections::HashMap;

use crate::{Error, Partition, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub nmi: f64,
    pub relative_error: f64,
    pub n_inferred: usize,
    pub n_truth: usize,
}

impl EvalReport {
    pub fn compare(inferred: &Partition, truth: &Partition) -> Result<Self> {
        Ok(Self {
            nmi: nmi(inferred, truth)?,
            relative_error: relative_error(inferred, truth)?,
            n_inferred: inferred.community_count(),
            n_truth: truth.community_count(),
        })
    }
}

/// `NMI = 2 I(p; q) / (H(p) + H(q))` with natural-log entropies.
///
/// When both entropies vanish (both partitions are a single community, or a
/// single node) the result is 1 if the partitions are equal and 0 otherwise.
pub fn nmi(p: &Partition, q: &Partition) -> Result<f64> {
    if p.node_count() != q.node_count() {
        return Err(Error::InvalidArgument(format!(
            "partitions cover {} and {} nodes",
            p.node_count(),
            q.node_count()
        )));
    }
    let n = p.node_count();
    if n == 0 {
        return Err(Error::EmptyInput("NMI of empty partitions"));
    }
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    for v in 0..n {
        *joint.entry((p.community_of(v), q.community_of(v))).or_insert(0) += 1;
    }
    let (sp, sq) = (p.sizes(), q.sizes());
    let nf = n as f64;
    let entropy = |sizes: &[usize]| -> f64 {
        sizes
            .iter()
            .map(|&s| {
                let f = s as f64 / nf;
                -f * f.ln()
            })
            .sum()
    };
    let (hp, hq) = (entropy(&sp), entropy(&sq));
    if hp + hq <= 0.0 {
        return Ok(if p == q { 1.0 } else { 0.0 });
    }
    let mut keys: Vec<_> = joint.into_iter().collect();
    keys.sort_unstable();
    let mi: f64 = keys
        .iter()
        .map(|&((a, b), c)| {
            let c = c as f64;
            c / nf * (c * nf / (sp[a] as f64 * sq[b] as f64)).ln()
        })
        .sum();
    Ok((2.0 * mi / (hp + hq)).clamp(0.0, 1.0))
}

/// `(C - C*) / C*` for `C` inferred and `C*` true communities.
pub fn relative_error(inferred: &Partition, truth: &Partition) -> Result<f64> {
    let truth_count = truth.community_count();
    if truth_count == 0 {
        return Err(Error::EmptyInput("ground truth has no communities"));
    }
    Ok((inferred.community_count() as f64 - truth_count as f64) / truth_count as f64)
}
