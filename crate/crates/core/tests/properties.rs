//! Randomized invariants, each compared with a definition-level oracle.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use ultraball::ballean::{
    ballean_from_tree, check_ball_transitivity, check_cover_criterion, enumerate_ballean, hasse, tree_digraph, Sampling,
};
use ultraball::ballmap::{exists_ball_preserving_bijection, find_isometry, is_ball_preserving, is_isometry, posets_isomorphic_iff_ballmap};
use ultraball::generate::{generate_random, random_unlabeled_tree, GenConfig};
use ultraball::isomorphism::{brute_force_tree_iso, canonical_labeled, canonical_unlabeled, tree_isomorphism, verify_tree_bijection};
use ultraball::reptree::strip_labels;
use ultraball::selfcheck::disguise;
use ultraball::tree::gamma_all;
use ultraball::{build_rep_tree, distance_from_tree, RootedTree, Scalar, UltrametricSpace};

fn space(max_n: usize) -> impl Strategy<Value = UltrametricSpace> {
    (any::<u64>(), 1..=max_n, 1usize..=6, 1u32..=4).prop_map(|(seed, n, depth_bound, label_pool)| {
        generate_random(&GenConfig {
            seed,
            n,
            depth_bound,
            label_pool,
        })
    })
}

/// Small symmetric matrices over `{0, 1, 2, 3}` with a zero diagonal:
/// mostly not ultrametric.
fn raw_matrix() -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(0u64..4, n * n).prop_map(move |cells| {
            let mut m = vec![vec![Scalar::zero(); n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    m[i][j] = Scalar::from_integer(cells[i * n + j]);
                    m[j][i] = m[i][j].clone();
                }
            }
            m
        })
    })
}

fn children_of<T: RootedTree>(t: &T) -> Vec<Vec<usize>> {
    (0..t.node_count()).map(|v| t.children(v).to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn validation_matches_triple_check(m in raw_matrix()) {
        let labels = (0..m.len()).map(|i| format!("x{i}")).collect();
        let accepted = UltrametricSpace::from_matrix(labels, m.clone()).is_ok();
        prop_assert_eq!(accepted, common::is_ultrametric(&m));
    }

    #[test]
    fn tree_reproduces_distances(s in space(12)) {
        let t = build_rep_tree(&s);
        for x in 0..s.len() {
            for y in 0..s.len() {
                prop_assert_eq!(&distance_from_tree(&t, x, y).unwrap(), s.dist(x, y));
            }
        }
    }

    #[test]
    fn tree_matches_recursive_splitting(s in space(12)) {
        let t = build_rep_tree(&s);
        let nodes: BTreeSet<(common::Set, Scalar)> = gamma_all(&t)
            .into_iter()
            .enumerate()
            .map(|(v, g)| (g.iter().collect(), t.label(v).cloned().unwrap_or_else(Scalar::zero)))
            .collect();
        prop_assert_eq!(nodes.len(), t.node_count());
        prop_assert_eq!(nodes, common::top_down_nodes(&s));
    }

    #[test]
    fn balls_are_subtree_leaf_sets(s in space(12)) {
        let b = enumerate_ballean(&s);
        let found: BTreeSet<common::Set> = b.member_sets().map(|m| m.iter().collect()).collect();
        prop_assert_eq!(&found, &common::balls(&s));
        let t = build_rep_tree(&s);
        prop_assert_eq!(b.len(), t.node_count());
        prop_assert_eq!(ballean_from_tree(&t), b);
    }

    #[test]
    fn cover_relation_is_the_tree(s in space(10)) {
        let b = enumerate_ballean(&s);
        let h = hasse(&b);
        let sets: Vec<common::Set> = b.member_sets().map(|m| m.iter().collect()).collect();
        let arcs: BTreeSet<(common::Set, common::Set)> = h.arcs().iter().map(|&(u, v)| (sets[u].clone(), sets[v].clone())).collect();
        prop_assert_eq!(&arcs, &common::covers(&sets.iter().cloned().collect()));
        let t = build_rep_tree(&s);
        prop_assert_eq!(canonical_unlabeled(&h.to_tree().unwrap()), canonical_unlabeled(&tree_digraph(&t).to_tree().unwrap()));
        prop_assert!(check_cover_criterion(&t).is_ok());
    }

    #[test]
    fn ball_transitivity(s in space(8)) {
        let report = check_ball_transitivity(&s, Sampling::default());
        prop_assert!(report.exhaustive);
        prop_assert!(report.passed(), "{:?}", report.failure);
    }

    #[test]
    fn canonical_forms_ignore_point_order(s in space(12), seed in any::<u64>()) {
        let copy = disguise(&s, seed);
        let moved = s.permuted(&{
            let n = s.len();
            (0..n).map(|i| (i + seed as usize % n) % n).collect::<Vec<_>>()
        });
        prop_assert_eq!(canonical_labeled(&build_rep_tree(&s)), canonical_labeled(&build_rep_tree(&moved)));
        prop_assert_eq!(canonical_unlabeled(&build_rep_tree(&s)), canonical_unlabeled(&build_rep_tree(&copy)));
        let f = find_isometry(&s, &moved).expect("a permuted copy is isometric");
        prop_assert!(is_isometry(&f, &s, &moved));
    }

    #[test]
    fn canonical_equality_is_isomorphism(a in 0u64..1000, b in 0u64..1000, la in 1usize..=6, lb in 1usize..=6) {
        let ta = random_unlabeled_tree(a, la, 4);
        let tb = random_unlabeled_tree(b, lb, 4);
        prop_assume!(ta.node_count() <= 10 && tb.node_count() <= 10);
        let same = canonical_unlabeled(&ta) == canonical_unlabeled(&tb);
        prop_assert_eq!(same, common::trees_isomorphic(&children_of(&ta), ta.root(), &children_of(&tb), tb.root()));
        prop_assert_eq!(same, brute_force_tree_iso(&ta, &tb, 10).unwrap().is_some());
        match tree_isomorphism(&ta, &tb) {
            Some(f) => prop_assert!(same && verify_tree_bijection(&ta, &tb, &f)),
            None => prop_assert!(!same),
        }
    }

    #[test]
    fn ball_equivalence_matches_exhaustive_search(x in space(6), y in space(6)) {
        let decision = exists_ball_preserving_bijection(&x, &y);
        prop_assert_eq!(decision.equivalent, common::ball_equivalent(&x, &y));
        if let Some(w) = &decision.witness {
            prop_assert!(is_ball_preserving(w, &x, &y).unwrap().is_preserving());
        }
        prop_assert!(posets_isomorphic_iff_ballmap(&x, &y).consistent());
    }

    #[test]
    fn disguised_copies_are_ball_equivalent(s in space(6), seed in any::<u64>()) {
        let copy = disguise(&s, seed);
        prop_assert!(common::ball_equivalent(&s, &copy));
        prop_assert!(exists_ball_preserving_bijection(&s, &copy).equivalent);
        prop_assert_eq!(find_isometry(&s, &copy).is_some(), common::isometric(&s, &copy));
        let stripped = strip_labels(&build_rep_tree(&s));
        prop_assert_eq!(canonical_unlabeled(&stripped), canonical_unlabeled(&build_rep_tree(&copy)));
    }
}
