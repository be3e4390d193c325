//! LFR-style planted-partition benchmark networks.
//!
//! Degrees follow a truncated power law `p(k) ~ k^degree_exponent` on
//! `[k_min, max_degree]`, with `k_min` solved so that the distribution mean
//! equals `avg_degree`; the sampled sequence is then nudged by single units
//! until its sum is `avg_degree * n_nodes`. Community sizes follow `p(s) ~ s^community_exponent`
//! on `[min_community, max_community]`. Every node splits its degree into an
//! intra-community part `(1 - mu) k` (randomly rounded) and an inter part, is
//! placed in a community large enough for its intra part, and the two stub
//! sets are wired by configuration-model matching with rewiring to
//! remove self-loops, multi-edges and (for inter stubs) same-community
//! pairs. Stubs that cannot be placed are dropped.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::{rng, DeletionSpec, Error, Graph, Partition, Result};

/// Largest allowed gap between requested and measured mixing.
pub const MIXING_TOLERANCE: f64 = 0.05;
const MAX_ATTEMPTS: u64 = 10;
const REMATCH_ROUNDS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub n_nodes: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
    /// Exponent of `p(k) ~ k^exponent`; negative for a decaying law.
    pub degree_exponent: f64,
    pub community_exponent: f64,
    pub min_community: usize,
    pub max_community: usize,
    pub mu: f64,
    /// Fraction of edges deleted after generation.
    pub delta: f64,
    pub seed: u64,
}

impl Default for BenchmarkSpec {
    fn default() -> Self {
        Self {
            n_nodes: 1000,
            avg_degree: 10.0,
            max_degree: 50,
            degree_exponent: -2.0,
            community_exponent: -1.0,
            min_community: 10,
            max_community: 50,
            mu: 0.1,
            delta: 0.0,
            seed: 1,
        }
    }
}

impl BenchmarkSpec {
    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_nodes(mut self, n: usize) -> Self {
        self.n_nodes = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(0.0..=1.0).contains(&self.mu) {
            return bad(format!("mu {} outside [0, 1]", self.mu));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return bad(format!("delta {} outside [0, 1]", self.delta));
        }
        if !self.degree_exponent.is_finite() || !self.community_exponent.is_finite() {
            return bad("exponents must be finite".into());
        }
        if self.min_community < 2 {
            return Err(Error::Infeasible(format!(
                "min_community {} < 2",
                self.min_community
            )));
        }
        if self.min_community > self.max_community {
            return Err(Error::Infeasible(format!(
                "min_community {} > max_community {}",
                self.min_community, self.max_community
            )));
        }
        if self.max_community > self.n_nodes {
            return Err(Error::Infeasible(format!(
                "max_community {} > n_nodes {}",
                self.max_community, self.n_nodes
            )));
        }
        if self.max_degree == 0 || self.max_degree >= self.n_nodes {
            return Err(Error::Infeasible(format!(
                "max_degree {} must lie in [1, n_nodes)",
                self.max_degree
            )));
        }
        if !(self.avg_degree >= 1.0 && self.avg_degree < self.max_degree as f64) {
            return Err(Error::Infeasible(format!(
                "avg_degree {} must lie in [1, max_degree {})",
                self.avg_degree, self.max_degree
            )));
        }
        if (1.0 - self.mu) * self.max_degree as f64 > self.max_community as f64 {
            return Err(Error::Infeasible(format!(
                "(1 - mu) * max_degree = {} exceeds max_community {}",
                (1.0 - self.mu) * self.max_degree as f64,
                self.max_community
            )));
        }
        Ok(())
    }
}

/// A benchmark graph with its planted partition.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedNetwork {
    pub graph: Graph,
    pub truth: Partition,
}

impl PlantedNetwork {
    /// Fraction of edges whose endpoints lie in different planted communities.
    pub fn measured_mixing(&self) -> f64 {
        let m = self.graph.edge_count();
        if m == 0 {
            return 0.0;
        }
        let inter = self
            .graph
            .edges()
            .filter(|&(u, v, _)| !self.truth.same_community(u, v))
            .count();
        inter as f64 / m as f64
    }

    /// Same planted partition, `round(delta * |E|)` random edges removed.
    pub fn perturb(&self, delta: f64, seed: u64) -> Result<PlantedNetwork> {
        let spec = DeletionSpec::new(delta, seed)?;
        Ok(PlantedNetwork {
            graph: self.graph.delete_edges_random(&spec)?,
            truth: self.truth.clone(),
        })
    }
}

/// Generates the complete benchmark network (no deletion applied). Attempts
/// are regenerated from fresh random streams until the measured mixing lies
/// within [`MIXING_TOLERANCE`] of `mu`.
pub fn generate(spec: &BenchmarkSpec) -> Result<PlantedNetwork> {
    spec.validate()?;
    let mut last = f64::NAN;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rng::stream(spec.seed, attempt);
        let net = generate_once(spec, &mut rng)?;
        last = net.measured_mixing();
        if (last - spec.mu).abs() <= MIXING_TOLERANCE {
            return Ok(net);
        }
    }
    Err(Error::Infeasible(format!(
        "measured mixing {last:.3} stays outside mu {} +/- {MIXING_TOLERANCE} after {MAX_ATTEMPTS} attempts",
        spec.mu
    )))
}

/// Generates the network and applies `delta` edge deletion, seeded by a
/// stream of `seed` that generation does not use.
pub fn generate_incomplete(spec: &BenchmarkSpec) -> Result<PlantedNetwork> {
    let net = generate(spec)?;
    if spec.delta == 0.0 {
        return Ok(net);
    }
    let deletion_seed: u64 = rng::stream(spec.seed, u32::MAX as u64).random();
    net.perturb(spec.delta, deletion_seed)
}

fn generate_once(spec: &BenchmarkSpec, rng: &mut rng::Rng) -> Result<PlantedNetwork> {
    let n = spec.n_nodes;
    let mut degrees = sample_degrees(spec, rng)?;
    let sizes = sample_community_sizes(spec, rng)?;
    let largest = *sizes.iter().max().expect("at least one community");

    let mut intra: Vec<usize> = degrees
        .iter()
        .map(|&k| {
            let target = (1.0 - spec.mu) * k as f64;
            let base = target.floor();
            let extra = usize::from(rng.random::<f64>() < target - base);
            (base as usize + extra).min(k)
        })
        .collect();
    for v in 0..n {
        if intra[v] > largest - 1 {
            // no community can host this many internal neighbors
            degrees[v] -= intra[v] - (largest - 1);
            intra[v] = largest - 1;
        }
    }

    let membership = assign_communities(&sizes, &mut intra, &mut degrees, rng)?;

    let mut members = vec![Vec::new(); sizes.len()];
    for (v, &c) in membership.iter().enumerate() {
        members[c].push(v);
    }
    // each community needs an even number of internal stubs: add one where
    // degree and community size allow, otherwise drop one
    for group in &members {
        let total: usize = group.iter().map(|&v| intra[v]).sum();
        if total.is_multiple_of(2) {
            continue;
        }
        let grow = group
            .iter()
            .copied()
            .filter(|&v| intra[v] + 1 < group.len() && degrees[v] < spec.max_degree)
            .min_by_key(|&v| (intra[v], v));
        match grow {
            Some(v) => {
                intra[v] += 1;
                degrees[v] += 1;
            }
            None => {
                let &v = group
                    .iter()
                    .max_by_key(|&&v| (intra[v], std::cmp::Reverse(v)))
                    .expect("communities are non-empty");
                intra[v] -= 1;
                degrees[v] -= 1;
            }
        }
    }
    let mut inter: Vec<usize> = (0..n).map(|v| degrees[v] - intra[v]).collect();
    if inter.iter().sum::<usize>() % 2 == 1 {
        if let Some(v) = (0..n).rev().find(|&v| inter[v] > 0) {
            inter[v] -= 1;
        }
    }

    let mut present: HashSet<(usize, usize)> = HashSet::new();
    let mut edges = Vec::new();
    for group in &members {
        let mut stubs: Vec<usize> = group
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, intra[v]))
            .collect();
        match_stubs(&mut stubs, |a, b| a != b, &mut present, &mut edges, rng);
    }
    let mut stubs: Vec<usize> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, inter[v]))
        .collect();
    match_stubs(
        &mut stubs,
        |a, b| membership[a] != membership[b],
        &mut present,
        &mut edges,
        rng,
    );

    Ok(PlantedNetwork {
        graph: Graph::from_edges(n, edges)?,
        truth: Partition::from_labels(&membership),
    })
}

/// `integral_a^b x^p dx`.
fn power_integral(p: f64, a: f64, b: f64) -> f64 {
    if (p + 1.0).abs() < 1e-12 {
        (b / a).ln()
    } else {
        (b.powf(p + 1.0) - a.powf(p + 1.0)) / (p + 1.0)
    }
}

fn power_law_mean(p: f64, a: f64, b: f64) -> f64 {
    power_integral(p + 1.0, a, b) / power_integral(p, a, b)
}

/// Inverse-CDF draw from the continuous law `x^p` on `[a, b]`.
fn power_law_draw(p: f64, a: f64, b: f64, u: f64) -> f64 {
    if (p + 1.0).abs() < 1e-12 {
        a * (b / a).powf(u)
    } else {
        let (lo, hi) = (a.powf(p + 1.0), b.powf(p + 1.0));
        (lo + u * (hi - lo)).powf(1.0 / (p + 1.0))
    }
}

fn sample_degrees(spec: &BenchmarkSpec, rng: &mut rng::Rng) -> Result<Vec<usize>> {
    let (p, b) = (spec.degree_exponent, spec.max_degree as f64);
    let target = spec.avg_degree;
    let (mut lo, mut hi) = (1.0, b);
    if power_law_mean(p, lo, b) > target {
        return Err(Error::Infeasible(format!(
            "avg_degree {target} below the smallest mean reachable with exponent {p}"
        )));
    }
    // the mean grows with the lower cutoff
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if power_law_mean(p, mid, b) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k_min = 0.5 * (lo + hi);
    let mut degrees: Vec<usize> = (0..spec.n_nodes)
        .map(|_| {
            let x = power_law_draw(p, k_min, b, rng.random());
            (x.round() as usize).clamp(1, spec.max_degree)
        })
        .collect();
    // nudge random nodes by one until the sum matches the target mean
    let want = (target * spec.n_nodes as f64).round() as usize;
    let mut sum: usize = degrees.iter().sum();
    while sum != want {
        let v = rng.random_range(0..spec.n_nodes);
        if sum < want && degrees[v] < spec.max_degree {
            degrees[v] += 1;
            sum += 1;
        } else if sum > want && degrees[v] > 1 {
            degrees[v] -= 1;
            sum -= 1;
        }
    }
    Ok(degrees)
}

fn sample_community_sizes(spec: &BenchmarkSpec, rng: &mut rng::Rng) -> Result<Vec<usize>> {
    let (lo, hi, n) = (spec.min_community, spec.max_community, spec.n_nodes);
    let weights: Vec<f64> = (lo..=hi)
        .map(|s| (s as f64).powf(spec.community_exponent))
        .collect();
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::Infeasible(format!("community size distribution: {e}")))?;
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < n {
        let s = lo + dist.sample(rng);
        if total + s <= n {
            sizes.push(s);
            total += s;
            continue;
        }
        let rest = n - total;
        if rest >= lo {
            // the last community is resampled to close the sum exactly
            sizes.push(rest);
            total = n;
            continue;
        }
        // too few nodes left for a community: spread them over those with room
        for _ in 0..rest {
            let open: Vec<usize> = (0..sizes.len()).filter(|&c| sizes[c] < hi).collect();
            let Some(&c) = open.get(rng.random_range(0..open.len().max(1))) else {
                return Err(Error::Infeasible(format!(
                    "cannot split {n} nodes into communities of size {lo}..={hi}"
                )));
            };
            sizes[c] += 1;
        }
        total = n;
    }
    Ok(sizes)
}

/// Places nodes, largest intra-degree first, into a uniformly chosen
/// community that still has room and can host the node's intra-degree. A
/// node that fits nowhere goes to the largest open community and loses the
/// intra stubs that community cannot host.
fn assign_communities(
    sizes: &[usize],
    intra: &mut [usize],
    degrees: &mut [usize],
    rng: &mut rng::Rng,
) -> Result<Vec<usize>> {
    let n = intra.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order.sort_by_key(|&v| std::cmp::Reverse(intra[v]));
    let mut room: Vec<usize> = sizes.to_vec();
    let mut membership = vec![usize::MAX; n];
    let mut eligible = Vec::with_capacity(sizes.len());
    for v in order {
        eligible.clear();
        eligible.extend((0..sizes.len()).filter(|&c| room[c] > 0 && sizes[c] > intra[v]));
        let c = if eligible.is_empty() {
            let c = (0..sizes.len())
                .filter(|&c| room[c] > 0)
                .max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)))
                .ok_or_else(|| Error::Infeasible("community sizes do not cover all nodes".into()))?;
            let cap = sizes[c] - 1;
            degrees[v] -= intra[v] - cap;
            intra[v] = cap;
            c
        } else {
            eligible[rng.random_range(0..eligible.len())]
        };
        room[c] -= 1;
        membership[v] = c;
    }
    Ok(membership)
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Random stub matching. Stubs from pairs that violate `valid` or duplicate
/// an existing edge are shuffled and re-paired for a few rounds, then
/// repaired by swapping endpoints with an accepted pair, trying each one at
/// most once; stubs that still do not fit are dropped.
fn match_stubs(
    stubs: &mut [usize],
    valid: impl Fn(usize, usize) -> bool,
    present: &mut HashSet<(usize, usize)>,
    out: &mut Vec<(usize, usize)>,
    rng: &mut rng::Rng,
) {
    stubs.shuffle(rng);
    let fits = |x: usize, y: usize, present: &HashSet<(usize, usize)>| {
        x != y && valid(x, y) && !present.contains(&key(x, y))
    };
    let mut accepted: Vec<(usize, usize)> = Vec::with_capacity(stubs.len() / 2);
    let mut loose: Vec<usize> = stubs.to_vec();
    // re-pair leftover stubs among themselves while that keeps making progress
    for _ in 0..REMATCH_ROUNDS {
        let mut next = Vec::new();
        for pair in loose.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if fits(a, b, present) {
                present.insert(key(a, b));
                accepted.push(key(a, b));
            } else {
                next.extend([a, b]);
            }
        }
        if next.len() == loose.len() && next.len() < 4 {
            break;
        }
        loose = next;
        loose.shuffle(rng);
    }
    for pair in loose.chunks_exact(2) {
        let (a, b) = (pair[0], pair[1]);
        if accepted.is_empty() {
            break;
        }
        // every accepted pair is tried once, from a random starting point
        let start = rng.random_range(0..accepted.len());
        let flip = rng.random::<bool>();
        for offset in 0..accepted.len() {
            let i = (start + offset) % accepted.len();
            let (c, d) = accepted[i];
            let swapped = [(c, d), (d, c)];
            let order = if flip { [swapped[1], swapped[0]] } else { swapped };
            let Some((x, y)) = order
                .into_iter()
                .find(|&(x, y)| fits(a, x, present) && fits(b, y, present) && key(a, x) != key(b, y))
            else {
                continue;
            };
            present.remove(&(c, d));
            present.insert(key(a, x));
            present.insert(key(b, y));
            accepted[i] = key(a, x);
            accepted.push(key(b, y));
            break;
        }
    }
    out.extend(accepted);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_mean_matches_closed_forms() {
        // exponent -2 on [a, b]: ln(b/a) / (1/a - 1/b)
        let (a, b) = (3.5f64, 50.0f64);
        let expected = (b / a).ln() / (1.0 / a - 1.0 / b);
        assert!((power_law_mean(-2.0, a, b) - expected).abs() < 1e-12);
        // exponent -1: (b - a) / ln(b/a)
        let expected = (b - a) / (b / a).ln();
        assert!((power_law_mean(-1.0, a, b) - expected).abs() < 1e-12);
        assert_eq!(power_law_draw(-2.0, a, b, 0.0), a);
        assert!((power_law_draw(-1.0, a, b, 1.0) - b).abs() < 1e-9);
    }

    #[test]
    fn degree_sequence_hits_the_target_mean() {
        for (seed, n, avg) in [(0, 1000, 10.0), (1, 200, 6.0), (2, 333, 13.7), (3, 5000, 20.0)] {
            let spec = BenchmarkSpec {
                avg_degree: avg,
                ..BenchmarkSpec::default().with_nodes(n)
            };
            let degrees = sample_degrees(&spec, &mut rng::seeded(seed)).unwrap();
            let sum: usize = degrees.iter().sum();
            assert_eq!(sum, (avg * n as f64).round() as usize);
            assert!(degrees.iter().all(|&k| (1..=50).contains(&k)));
        }
    }

    #[test]
    fn sizes_respect_bounds_and_sum() {
        let spec = BenchmarkSpec::default();
        for seed in 0..20 {
            let sizes = sample_community_sizes(&spec, &mut rng::seeded(seed)).unwrap();
            assert_eq!(sizes.iter().sum::<usize>(), 1000);
            assert!(sizes.iter().all(|&s| (10..=50).contains(&s)));
        }
    }

    #[test]
    fn infeasible_specs_are_rejected() {
        let spec = BenchmarkSpec {
            max_community: 20,
            min_community: 10,
            mu: 0.1,
            ..BenchmarkSpec::default()
        };
        assert!(matches!(generate(&spec), Err(Error::Infeasible(_))));
        let spec = BenchmarkSpec {
            min_community: 60,
            ..BenchmarkSpec::default()
        };
        assert!(matches!(generate(&spec), Err(Error::Infeasible(_))));
        let spec = BenchmarkSpec::default().with_mu(1.5);
        assert!(matches!(generate(&spec), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn stub_matching_yields_simple_valid_edges() {
        let mut rng = rng::seeded(4);
        let mut stubs: Vec<usize> = (0..20).flat_map(|v| [v, v, v]).collect();
        stubs.push(0);
        stubs.push(1);
        let mut present = HashSet::new();
        let mut out = Vec::new();
        match_stubs(&mut stubs, |a, b| (a % 2) != (b % 2), &mut present, &mut out, &mut rng);
        let unique: HashSet<_> = out.iter().copied().collect();
        assert_eq!(unique.len(), out.len());
        assert!(out.iter().all(|&(a, b)| a < b && a % 2 != b % 2));
        assert!(out.len() >= 25, "{}", out.len());
    }
}
