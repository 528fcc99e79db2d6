use hampow::{blow_up, power_cycle, power_path, Graph, VertexSet};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs
                .zip(bits)
                .filter(|(_, b)| *b)
                .map(|(e, _)| e)
                .collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

fn edge_set(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().collect()
}

#[test]
fn path_power_edge_counts() {
    for m in 1..=8 {
        for s in m + 1..=30 {
            let g = power_path(s, m);
            assert_eq!(g.edge_count(), m * s - m * (m + 1) / 2, "s={s} m={m}");
            // every pair at distance at most m, and nothing else
            for u in 0..s {
                for v in u + 1..s {
                    assert_eq!(g.has_edge(u, v), v - u <= m);
                }
            }
        }
    }
}

#[test]
fn cycle_power_windows_are_cliques() {
    for n in 3..=24 {
        for m in 1..=n / 2 {
            let g = power_cycle(n, m).unwrap();
            for start in 0..n {
                let w: Vec<usize> = (0..=m).map(|i| (start + i) % n).collect();
                for (a, &u) in w.iter().enumerate() {
                    assert!(w[a + 1..].iter().all(|&v| g.has_edge(u, v)), "n={n} m={m}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn trivial_blow_up_is_identity(g in arb_graph(12)) {
        let b = blow_up(&g, &vec![1; g.n()]).unwrap();
        prop_assert_eq!(edge_set(&b.graph), edge_set(&g));
    }

    #[test]
    fn joint_neighbourhoods(g in arb_graph(14), picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let n = g.n();
        let u = picks[0].index(n);
        let single = g.joint_neighborhood(&VertexSet::from_vertices(n, [u]).unwrap()).unwrap();
        prop_assert_eq!(single.to_vec(), (0..n).filter(|&v| g.has_edge(u, v)).collect::<Vec<_>>());
        // adding vertices to J can only shrink N(J)
        let mut j = VertexSet::empty(n);
        let mut prev = VertexSet::full(n);
        for p in &picks {
            j.insert(p.index(n));
            let cur = g.joint_neighborhood(&j).unwrap();
            prop_assert!(cur.is_subset(&prev));
            prev = cur;
        }
    }

    #[test]
    fn union_laws(seed in any::<u64>(), n in 1usize..14) {
        let gs: Vec<Graph> = (0..3u64)
            .map(|i| hampow::sample_gnp(n, 0.4, seed.wrapping_add(i)))
            .collect();
        let (a, b, c) = (&gs[0], &gs[1], &gs[2]);
        prop_assert_eq!(edge_set(&a.union(b).unwrap()), edge_set(&b.union(a).unwrap()));
        prop_assert_eq!(
            edge_set(&a.union(b).unwrap().union(c).unwrap()),
            edge_set(&a.union(&b.union(c).unwrap()).unwrap())
        );
        prop_assert_eq!(edge_set(&a.union(a).unwrap()), edge_set(a));
    }
}
