use proptest::prelude::*;

use ndncache_core::engine::EventQueue;
use ndncache_core::fusion::{allocate, weights, WeightVector};
use ndncache_core::ndn::{CatalogModel, ContentName, ContentStore};
use ndncache_core::topology::{betweenness, degree_centrality, next_hops};
use ndncache_core::{EwmaEstimator, Link, NodeId, NodeKind, SimTime, Topology};

/// Connected router-only graph: a random spanning tree plus extra edges.
fn graph() -> impl Strategy<Value = Topology> {
    (2usize..10)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|i| 0..i).collect();
            let extra = proptest::collection::vec((0..n, 0..n), 0..n);
            (Just(n), parents, extra)
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents
                .into_iter()
                .enumerate()
                .map(|(i, p)| (p, i + 1))
                .collect();
            for (a, b) in extra {
                let e = (a.min(b), a.max(b));
                if a != b && !edges.contains(&e) {
                    edges.push(e);
                }
            }
            let links = edges.iter().map(|&(a, b)| Link::new(a, b, 1e9, 0.001)).collect();
            Topology::new(vec![NodeKind::Router; n], links).unwrap()
        })
}

proptest! {
    #[test]
    fn degree_sum_is_twice_the_edge_count(t in graph()) {
        let d = degree_centrality(&t);
        prop_assert_eq!(d.as_slice().iter().sum::<f64>(), 2.0 * t.links().len() as f64);
    }

    #[test]
    fn betweenness_total_counts_interior_hops(t in graph()) {
        // each unordered pair adds (distance - 1) intermediate visits in total
        let bc = betweenness(&t);
        let mut expected = 0.0;
        for s in t.nodes() {
            let d = t.hop_distances(s);
            for u in t.nodes().filter(|u| u.index() > s.index()) {
                expected += (d[u.index()].unwrap() - 1) as f64;
            }
        }
        let total: f64 = bc.as_slice().iter().sum();
        prop_assert!((total - expected).abs() < 1e-9, "{} vs {}", total, expected);
        prop_assert!(bc.as_slice().iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn next_hop_routes_are_shortest_and_loop_free(t in graph()) {
        let table = next_hops(&t);
        for s in t.nodes() {
            let d = t.hop_distances(s);
            for u in t.nodes() {
                let route = table.route(s, u);
                prop_assert_eq!(route.first().copied(), Some(s));
                prop_assert_eq!(route.last().copied(), Some(u));
                prop_assert_eq!(route.len() - 1, d[u.index()].unwrap());
                let mut seen = route.clone();
                seen.sort();
                seen.dedup();
                prop_assert_eq!(seen.len(), route.len());
            }
        }
    }

    #[test]
    fn lru_keeps_the_last_k_inserted(cap in 1usize..20, names in proptest::collection::vec(0u32..40, 1..100)) {
        let mut cs = ContentStore::new(cap);
        for &f in &names {
            cs.insert(ContentName::new(1, f, 0));
        }
        prop_assert!(cs.len() <= cap);
        // the most recent `cap` distinct names are exactly the contents
        let mut recent = Vec::new();
        for &f in names.iter().rev() {
            if !recent.contains(&f) && recent.len() < cap {
                recent.push(f);
            }
        }
        for &f in &recent {
            prop_assert!(cs.contains(&ContentName::new(1, f, 0)));
        }
        prop_assert_eq!(cs.len(), recent.len());
    }

    #[test]
    fn lru_law(cap in 1usize..50, k in 0usize..50, offset in 0u32..1000) {
        let k = k.min(cap);
        let mut cs = ContentStore::new(cap);
        for i in 0..k as u32 {
            prop_assert_eq!(cs.insert(ContentName::new(2, offset + i, 0)), None);
        }
        for i in 0..k as u32 {
            prop_assert!(cs.lookup(&ContentName::new(2, offset + i, 0)));
        }
        prop_assert_eq!(cs.hits(), k as u64);
    }

    #[test]
    fn ewma_deviation_stays_non_negative(samples in proptest::collection::vec(0.0f64..1e6, 1..200)) {
        let mut e = EwmaEstimator::new();
        for &x in &samples {
            e.update(x).unwrap();
            prop_assert!(e.dev() >= 0.0);
            prop_assert!(e.estimate().unwrap() >= e.avg());
        }
        let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().cloned().fold(0.0, f64::max);
        prop_assert!(e.avg() >= lo - 1e-9 && e.avg() <= hi + 1e-9);
    }

    #[test]
    fn allocation_sums_and_preserves_order(
        w in proptest::collection::vec(0.0f64..10.0, 1..30),
        extra in 0usize..5000,
    ) {
        prop_assume!(w.iter().any(|&x| x > 0.0));
        let n = w.len();
        let total = n + extra;
        let wv = WeightVector { routers: (0..n).map(NodeId).collect(), values: w.clone() };
        let plan = allocate(&wv, total).unwrap();
        prop_assert_eq!(plan.capacities.iter().sum::<usize>(), total);
        prop_assert!(plan.capacities.iter().all(|&c| c >= 1));
        for i in 0..n {
            for j in 0..n {
                if w[i] > w[j] {
                    prop_assert!(plan.capacities[i] >= plan.capacities[j]);
                }
            }
        }
    }

    #[test]
    fn weights_are_monotone_in_fused_value(fused in proptest::collection::vec(-2.0f64..2.0, 1..20)) {
        let routers: Vec<NodeId> = (0..fused.len()).map(NodeId).collect();
        let w = weights(&routers, &fused, 0.01).unwrap();
        let s: f64 = w.values.iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
        for i in 0..fused.len() {
            prop_assert!(w.values[i] > 0.0);
            for j in 0..fused.len() {
                if fused[i] >= fused[j] {
                    prop_assert!(w.values[i] >= w.values[j]);
                }
            }
        }
    }

    #[test]
    fn pmf_strictly_decreasing(q in 0.0f64..60.0, s in 0.5f64..2.5, files in 2u32..300) {
        let c = CatalogModel::new(q, s, files, 1).unwrap();
        for i in 1..files {
            prop_assert!(c.pmf(i).unwrap() > c.pmf(i + 1).unwrap());
        }
    }

    #[test]
    fn events_fire_in_time_then_fifo_order(times in proptest::collection::vec(0u64..50, 1..200)) {
        let mut q = EventQueue::new();
        for (k, &t) in times.iter().enumerate() {
            q.schedule(SimTime::from_nanos(t), k);
        }
        let mut fired = Vec::new();
        q.run_to_completion(|q, k| fired.push((q.now().as_nanos(), k)));
        let mut expected: Vec<(u64, usize)> = times.iter().copied().zip(0..).collect();
        expected.sort();
        prop_assert_eq!(fired, expected);
    }
}
