use nodal_core::experiment::pipeline_specrad;
use nodal_core::nodal::Sign;
use nodal_core::oracle::random_graph;
use nodal_core::structure::{build_h, HOptions};
use nodal_core::wave::{local_distribution, neighbor_correlation, second_moment, SphericalProfile};
use nodal_core::{
    eigendecompose, nodal_domains, random_regular, Graph, Mode, Outcome, SignVector, VertexSet,
};
use proptest::prelude::*;

fn regular_params() -> impl Strategy<Value = (usize, usize, u64)> {
    (3usize..=7, 4usize..=40, any::<u64>()).prop_map(|(d, n, seed)| {
        let n = n.max(d + 1);
        let n = if n * d % 2 == 1 { n + 1 } else { n };
        (n, d, seed)
    })
}

fn connected_within(g: &Graph, s: &VertexSet) -> bool {
    g.components(s).blocks.len() == 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_graphs_are_simple_and_regular((n, d, seed) in regular_params()) {
        let g = random_regular(n, d, seed).unwrap();
        prop_assert_eq!(g.n(), n);
        prop_assert_eq!(g.regular_degree(), Some(d));
        for v in 0..n {
            prop_assert!(!g.neighbors(v).contains(&v));
            prop_assert!(g.neighbors(v).windows(2).all(|w| w[0] < w[1]));
        }
        let again = random_regular(n, d, seed).unwrap();
        prop_assert_eq!(g.content_hash(), again.content_hash());
    }

    #[test]
    fn edge_list_round_trip(n in 1usize..30, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let back = Graph::parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.content_hash(), g.content_hash());
    }

    #[test]
    fn nodal_partitions_are_consistent(
        n in 1usize..30,
        p in 0.05f64..0.6,
        seed in any::<u64>(),
        raw in prop::collection::vec(-3i32..=3, 30),
    ) {
        let g = random_graph(n, p, seed);
        let f: Vec<f64> = raw[..n].iter().map(|&x| f64::from(x)).collect();
        let signs = SignVector::new(&f).signs;

        let strong = nodal_domains(&g, &f, Mode::Strong).unwrap();
        let mut owner = vec![usize::MAX; n];
        for (i, dom) in strong.domains.iter().enumerate() {
            prop_assert!(connected_within(&g, &dom.vertices));
            for &v in dom.vertices.members() {
                prop_assert_eq!(owner[v], usize::MAX);
                owner[v] = i;
                let expected = if signs[v] > 0 { Sign::Positive } else { Sign::Negative };
                prop_assert_eq!(dom.sign, expected);
            }
        }
        for v in 0..n {
            prop_assert_eq!(owner[v] == usize::MAX, signs[v] == 0);
        }
        // distinct strong domains never touch through a same-sign edge
        for &(u, v) in g.edges() {
            if owner[u] != usize::MAX && owner[v] != usize::MAX && owner[u] != owner[v] {
                prop_assert!(signs[u] != signs[v]);
            }
        }

        let weak = nodal_domains(&g, &f, Mode::Weak).unwrap();
        let mut covered = vec![false; n];
        for dom in &weak.domains {
            prop_assert!(connected_within(&g, &dom.vertices));
            dom.vertices.members().iter().for_each(|&v| covered[v] = true);
        }
        prop_assert!(covered.iter().all(|&c| c));
        prop_assert!(weak.count() <= strong.count() + signs.iter().filter(|&&s| s == 0).count());
        let mut sizes: Vec<usize> = strong.domains.iter().map(|d| d.len()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        prop_assert_eq!(strong.two_largest_total, sizes.iter().take(2).sum::<usize>());
    }

    #[test]
    fn balls_grow_monotonically(
        n in 2usize..40,
        p in 0.02f64..0.3,
        seed in any::<u64>(),
        pick in prop::collection::vec(any::<prop::sample::Index>(), 1..4),
    ) {
        let g = random_graph(n, p, seed);
        let s = VertexSet::new(n, pick.iter().map(|i| i.index(n))).unwrap();
        let mut previous = s.clone();
        for r in 0..=n {
            let ball = g.ball(&s, r);
            prop_assert!(previous.is_subset(&ball));
            prop_assert!(s.is_subset(&ball));
            previous = ball;
        }
        // the full radius reaches exactly the components meeting s
        let all = VertexSet::full(n);
        let reached: usize = g
            .components(&all)
            .blocks
            .iter()
            .filter(|b| b.members().iter().any(|&v| s.contains(v)))
            .map(VertexSet::len)
            .sum();
        prop_assert_eq!(previous.len(), reached);
    }

    #[test]
    fn components_are_not_adjacent(n in 1usize..40, p in 0.0f64..0.4, seed in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let parts = g.components(&VertexSet::full(n));
        let mut label = vec![usize::MAX; n];
        for (i, b) in parts.blocks.iter().enumerate() {
            b.members().iter().for_each(|&v| label[v] = i);
        }
        prop_assert!(label.iter().all(|&l| l != usize::MAX));
        for &(u, v) in g.edges() {
            prop_assert_eq!(label[u], label[v]);
        }
    }

    #[test]
    fn spherical_recursion_holds(d in 3usize..12, t in -1.0f64..1.0, radius in 1usize..10) {
        let lambda = t * d as f64;
        let profile = SphericalProfile::new(d, lambda, radius).unwrap();
        prop_assert_eq!(profile.values[0], 1.0);
        prop_assert!((profile.values[1] - lambda / d as f64).abs() < 1e-12);
        prop_assert!(profile.recursion_residual() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn local_moments_match_the_eigenvector((n, d, seed) in regular_params(), pick in any::<prop::sample::Index>()) {
        let g = random_regular(n, d, seed).unwrap();
        let es = eigendecompose(&g).unwrap();
        let i = pick.index(n);
        let f = &es.vectors[i];
        let dist = local_distribution(&g, f, 1, seed).unwrap();
        // averaging (sqrt(n) f(u))^2 over u returns |f|^2 = 1
        prop_assert!((second_moment(&dist, 0) - 1.0).abs() < 1e-9);
        // averaging f(u) f(neighbour) recovers the Rayleigh quotient over d
        let rho = neighbor_correlation(&dist, d).unwrap();
        prop_assert!((rho - es.values[i] / d as f64).abs() < 1e-9);
    }

    #[test]
    fn h_respects_its_degree_bound((n, d, seed) in regular_params(), pick in any::<prop::sample::Index>(), eps in 0.05f64..0.5) {
        let g = random_regular(n, d, seed).unwrap();
        let es = eigendecompose(&g).unwrap();
        let f = &es.vectors[pick.index(n)];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| f[b].abs().total_cmp(&f[a].abs()).then(a.cmp(&b)));
        let k = ((eps * n as f64).ceil() as usize).max(1);
        let s = VertexSet::new(n, order[..k].iter().copied()).unwrap();
        let report = build_h(&g, f, &s, &[], HOptions::default()).unwrap();
        prop_assert!(report.checks.max_degree_ok);
        if let Outcome::Checked(c) = pipeline_specrad(&report.h).unwrap() {
            prop_assert!(c.holds, "spectral radius bound failed: {:?}", c);
        }
    }
}
