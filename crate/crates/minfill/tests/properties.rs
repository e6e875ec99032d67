//! Cross-module property tests.

mod common;

use minfill::filling::{tour_lower_bound, WeightedFilling};
use minfill::metric::{shortest_path_closure, PseudometricSpace, SpaceClass, SpaceClassKind};
use minfill::rational::{rat, ratio, Rational};
use minfill::topology::{binary_tree_by_index, binary_tree_count, enumerate_binary_trees};
use proptest::prelude::*;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn parse_serialize_parse_is_identity(n in 2usize..=6, seed in 0u64..500, violating in any::<bool>()) {
        let kind = if violating {
            SpaceClassKind::TriangleViolating
        } else {
            SpaceClassKind::NonDegenerateMetric
        };
        let space = match PseudometricSpace::random(n, seed, kind) {
            Ok(space) => space,
            Err(_) => return Ok(()),
        };
        let text = space.to_json().to_string();
        let back = PseudometricSpace::parse(&text).unwrap();
        prop_assert_eq!(space, back);
    }

    #[test]
    fn closure_of_arbitrary_matrices_respects_triangles(
        n in 2usize..=5,
        entries in prop::collection::vec(0i64..=50, 25),
    ) {
        let mut dist = vec![vec![Rational::from_integer(0.into()); n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let v = rat(entries[k % entries.len()]);
                k += 1;
                dist[i][j] = v.clone();
                dist[j][i] = v;
            }
        }
        let closed = shortest_path_closure(dist);
        let space = PseudometricSpace::new(labels(n), closed).unwrap();
        prop_assert!(!matches!(space.classify(), SpaceClass::TriangleViolating(_)));
    }

    #[test]
    fn doubling_identity_for_arbitrary_weights(
        n in 2usize..=6,
        pick in any::<u64>(),
        numers in prop::collection::vec(-20i64..=20, 16),
        denoms in prop::collection::vec(1i64..=5, 16),
    ) {
        let names = labels(n);
        let count = binary_tree_count(n);
        let tree = binary_tree_by_index(&names, (pick as u128) % count).unwrap();
        let weights: Vec<Rational> = (0..tree.edge_count())
            .map(|e| ratio(numers[e % numers.len()], denoms[e % denoms.len()]))
            .collect();
        let filling = WeightedFilling::new(tree.clone(), weights).unwrap();
        let order = tree.planar_order().unwrap();
        let paths = tree.tour_paths(&order).unwrap();
        let total: Rational = paths.iter().map(|p| filling.path_weight(p)).sum();
        prop_assert_eq!(total, filling.total_weight() * rat(2));
        // Planarity itself: each edge in exactly two tour paths.
        for e in 0..tree.edge_count() {
            let hits = paths.iter().filter(|p| p.contains(&e)).count();
            prop_assert_eq!(hits, 2, "edge {} of n={}", e, n);
        }
    }

    #[test]
    fn tour_bound_is_half_the_cycle(n in 2usize..=6, seed in 0u64..200) {
        let space = PseudometricSpace::random(n, seed, SpaceClassKind::NonDegenerateMetric).unwrap();
        let names = labels(n);
        let tree = binary_tree_by_index(&names, 0).unwrap();
        let order = tree.planar_order().unwrap();
        let bound = tour_lower_bound(&space, &order).unwrap();
        let mut direct = Rational::from_integer(0.into());
        for k in 0..n {
            let a = &order.labels()[k];
            let b = &order.labels()[(k + 1) % n];
            direct += space.dist_by_label(a, b).unwrap();
        }
        prop_assert_eq!(bound * rat(2), direct);
    }

    #[test]
    fn quotient_then_split_restores_binary_trees(n in 4usize..=6, pick in any::<u64>(), edge_pick in any::<u64>()) {
        let names = labels(n);
        let count = binary_tree_count(n);
        let tree = binary_tree_by_index(&names, (pick as u128) % count).unwrap();
        // Contract one interior-interior edge, then split back to binary.
        let interior_edges: Vec<usize> = (0..tree.edge_count())
            .filter(|&e| {
                let (u, v) = tree.edge_endpoints(e);
                tree.is_interior(u) && tree.is_interior(v)
            })
            .collect();
        prop_assume!(!interior_edges.is_empty());
        let target = interior_edges[(edge_pick as usize) % interior_edges.len()];
        let contracted = tree.quotient(&[target]).unwrap();
        let split = contracted.split_to_binary().unwrap();
        prop_assert!(split.tree.is_binary());
        prop_assert_eq!(split.tree.edge_count(), tree.edge_count());
        prop_assert_eq!(split.added.len(), 1);
    }

    #[test]
    fn split_transfer_preserves_boundary_distances(
        n in 3usize..=6,
        pick in any::<u64>(),
        numers in prop::collection::vec(1i64..=9, 16),
        contract_pick in any::<u64>(),
    ) {
        let names = labels(n);
        let count = binary_tree_count(n);
        let binary = binary_tree_by_index(&names, (pick as u128) % count).unwrap();
        let interior_edges: Vec<usize> = (0..binary.edge_count())
            .filter(|&e| {
                let (u, v) = binary.edge_endpoints(e);
                binary.is_interior(u) && binary.is_interior(v)
            })
            .collect();
        prop_assume!(!interior_edges.is_empty());
        let target = interior_edges[(contract_pick as usize) % interior_edges.len()];
        let tree = binary.quotient(&[target]).unwrap();

        let weights: Vec<Rational> = (0..tree.edge_count())
            .map(|e| rat(numers[e % numers.len()]))
            .collect();
        let f = WeightedFilling::new(tree.clone(), weights).unwrap();
        let split = tree.split_to_binary().unwrap();
        let g = f.transfer_through_split(&split).unwrap();
        prop_assert_eq!(g.total_weight(), f.total_weight());
        let boundary = tree.boundary_labels();
        for i in 0..boundary.len() {
            for j in i + 1..boundary.len() {
                prop_assert_eq!(
                    g.dw_labels(&boundary[i], &boundary[j]).unwrap(),
                    f.dw_labels(&boundary[i], &boundary[j]).unwrap()
                );
            }
        }
    }

    #[test]
    fn random_spaces_match_their_request(n in 2usize..=6, seed in 0u64..300, which in 0u8..3) {
        let kind = match which {
            0 => SpaceClassKind::NonDegenerateMetric,
            1 => SpaceClassKind::DegeneratePseudometric,
            _ => SpaceClassKind::TriangleViolating,
        };
        // No triple can violate a triangle on two points.
        if kind == SpaceClassKind::TriangleViolating && n < 3 {
            prop_assert!(PseudometricSpace::random(n, seed, kind).is_err());
            return Ok(());
        }
        let space = PseudometricSpace::random(n, seed, kind).unwrap();
        prop_assert_eq!(space.classify().kind(), kind);
    }
}

#[test]
fn enumeration_matches_brute_force_up_to_five() {
    for n in 3..=5 {
        let names = labels(n);
        let brute = common::brute_force_binary_signatures(&names);
        let enumerated: std::collections::BTreeSet<String> = enumerate_binary_trees(&names)
            .unwrap()
            .map(|t| t.canonical_signature())
            .collect();
        assert_eq!(enumerated, brute, "n={n}");
        assert_eq!(enumerated.len() as u128, binary_tree_count(n), "n={n}");
    }
}
