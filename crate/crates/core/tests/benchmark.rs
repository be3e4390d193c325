use edgeboost::benchgen::{generate, generate_incomplete, MIXING_TOLERANCE};
use edgeboost::{BenchmarkSpec, Error};
use proptest::prelude::*;

#[test]
fn zero_mixing_has_only_internal_edges() {
    let net = generate(&BenchmarkSpec::default().with_mu(0.0).with_seed(4)).unwrap();
    assert_eq!(net.measured_mixing(), 0.0);
    let cc = net.graph.connected_components();
    for u in 0..net.graph.node_count() {
        for v in u + 1..net.graph.node_count() {
            if cc.same_community(u, v) {
                assert!(net.truth.same_community(u, v));
            }
        }
    }
}

#[test]
fn default_spec_at_mu_point_two() {
    let spec = BenchmarkSpec::default().with_mu(0.2);
    for seed in 0..5 {
        let net = generate(&spec.clone().with_seed(seed)).unwrap();
        let mix = net.measured_mixing();
        assert!((0.15..=0.25).contains(&mix), "seed {seed}: {mix}");
        let g = &net.graph;
        let mean = 2.0 * g.edge_count() as f64 / g.node_count() as f64;
        assert!((mean - 10.0).abs() <= 1.0, "mean degree {mean}");
        assert!((0..g.node_count()).all(|v| g.degree(v) <= 50));
        let sizes = net.truth.sizes();
        assert_eq!(sizes.iter().sum::<usize>(), 1000);
        assert!(sizes.iter().all(|s| (10..=50).contains(s)));
    }
}

#[test]
fn same_seed_same_network() {
    let spec = BenchmarkSpec::default().with_mu(0.3).with_delta(0.2).with_seed(77);
    assert_eq!(generate_incomplete(&spec).unwrap(), generate_incomplete(&spec).unwrap());
    let other = generate_incomplete(&spec.clone().with_seed(78)).unwrap();
    assert_ne!(generate_incomplete(&spec).unwrap().graph, other.graph);
}

#[test]
fn deletion_keeps_truth_and_removes_rounded_fraction() {
    let spec = BenchmarkSpec::default().with_mu(0.1).with_seed(3);
    let full = generate(&spec).unwrap();
    let cut = generate_incomplete(&spec.with_delta(0.3)).unwrap();
    assert_eq!(cut.truth, full.truth);
    let m = full.graph.edge_count() as f64;
    assert_eq!(cut.graph.edge_count(), full.graph.edge_count() - (0.3 * m).round_ties_even() as usize);
    assert!(cut.graph.edges().all(|(u, v, _)| full.graph.has_edge(u, v)));

    let again = full.perturb(0.0, 1).unwrap();
    assert_eq!(again, full);
    assert_eq!(full.perturb(1.0, 1).unwrap().graph.edge_count(), 0);
}

#[test]
fn infeasible_spec_is_reported() {
    let spec = BenchmarkSpec {
        max_degree: 80,
        n_nodes: 500,
        ..BenchmarkSpec::default()
    };
    assert!(matches!(generate(&spec), Err(Error::Infeasible(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_networks_respect_the_spec(
        mu in 0.0f64..0.6,
        seed in 0u64..1000,
        n in 200usize..600,
        avg in 6.0f64..14.0,
    ) {
        let spec = BenchmarkSpec {
            n_nodes: n,
            avg_degree: avg,
            mu,
            seed,
            ..BenchmarkSpec::default()
        };
        let net = generate(&spec).unwrap();
        prop_assert_eq!(net.truth.node_count(), n);
        prop_assert!((net.measured_mixing() - mu).abs() <= MIXING_TOLERANCE);
        let sizes = net.truth.sizes();
        prop_assert_eq!(sizes.iter().sum::<usize>(), n);
        prop_assert!(sizes.iter().all(|s| (10..=50).contains(s)));
        let g = &net.graph;
        prop_assert!((0..n).all(|v| g.degree(v) <= 50));
        // the sampled sequence hits avg exactly; hubs crowded into the few
        // communities large enough for them can leave a community's intra
        // sequence non-graphical, and those stubs are dropped; parity fixes
        // may add a stub per community
        let mean = 2.0 * g.edge_count() as f64 / n as f64;
        prop_assert!(mean <= 1.05 * avg && mean >= 0.85 * avg, "mean degree {} vs {}", mean, avg);
    }
}
