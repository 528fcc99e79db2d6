use hampow::density::{density_d, DEFAULT_SUBSET_CAP};
use hampow::*;
use num_rational::Ratio;
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, any::<u64>(), 0.15f64..0.9).prop_map(|(n, seed, p)| sample_gnp(n, p, seed))
}

fn connected(g: &Graph, vs: &[usize]) -> bool {
    let mut seen = vec![vs[0]];
    let mut i = 0;
    while i < seen.len() {
        let u = seen[i];
        for &w in vs {
            if !seen.contains(&w) && g.has_edge(u, w) {
                seen.push(w);
            }
        }
        i += 1;
    }
    seen.len() == vs.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_below_psi(g in arb_graph(11), logn in 2.0f64..10.0, p in 0.001f64..1.0) {
        prop_assume!(g.edge_count() > 0);
        let model = RandomModel::new(logn.exp().round() as u64, p).unwrap();
        let (phi_ln, _) = phi(&g, &model, DEFAULT_SUBSET_CAP).unwrap();
        prop_assert!(phi_ln <= psi_ln(g.n(), g.edge_count(), &model) + 1e-9);
        for l in 2..=g.n().min(5) {
            if count_cliques(&g, l, 1).count > 0 {
                prop_assert!(phi_ln <= psi_ln(l, l * (l - 1) / 2, &model) + 1e-9);
            }
        }
    }

    #[test]
    fn densest_subgraph_can_be_connected(g in arb_graph(10)) {
        prop_assume!(g.edge_count() > 0);
        let (m, _) = max_density_m(&g, DEFAULT_SUBSET_CAP).unwrap();
        let n = g.n();
        let mut best = Ratio::from_integer(0);
        for mask in 1u32..1 << n {
            let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if vs.len() < 2 || !connected(&g, &vs) {
                continue;
            }
            best = best.max(density_d(&g.induced(&vs)));
        }
        prop_assert_eq!(m, best);
    }
}

#[test]
fn expected_counts_of_braid_families_grow_linearly() {
    for (l, r) in [(2, 1), (3, 1), (4, 1), (6, 2)] {
        for k in 1..=2 {
            let g = multi_braid(k + 1, l, r, 2).unwrap().graph;
            for n in [100u64, 1_000, 10_000] {
                for c in [1.0, 2.0, 5.0] {
                    let p = (c * (n as f64).powf(-2.0 / l as f64)).min(1.0);
                    let model = RandomModel::new(n, p).unwrap();
                    let (phi_ln, _) = phi(&g, &model, DEFAULT_SUBSET_CAP).unwrap();
                    assert!(
                        phi_ln >= (c * n as f64).ln() - 1e-9,
                        "l={l} r={r} k={k} n={n} C={c}"
                    );
                }
            }
        }
    }
}
