use proptest::prelude::*;

use pseudometric::classify::{
    block_sizes_distinct, is_discrete_structural, is_pseudorectangle_structural, is_strongly_rigid_definitional,
    is_strongly_rigid_structural, metric_reflection,
};
use pseudometric::construct::{
    discrete_from_relation, labeled_zero_relation, pseudorectangle_from_relation, random_four_block_relation,
    random_relation, random_space, strongly_rigid_from_relation, Profile,
};
use pseudometric::groups::{
    cs_group, factorial, is_pseudoidentity, is_self_similarity, is_self_similarity_quadruple, pi_group,
    symmetric_group, Permutation,
};
use pseudometric::partition::{
    fiber_partition, otimes1, otimes2, partitions_equal, relation_from_partition, zero_partition,
    partition_from_relation, Partition,
};
use pseudometric::similarity::{find_similarity, transports_zero_classes};
use pseudometric::{PseudometricSpace, Rational};

fn any_space(max_n: usize) -> impl Strategy<Value = PseudometricSpace> {
    (1..=max_n, 0..Profile::ALL.len(), any::<u64>()).prop_map(|(n, p, seed)| {
        let profile = Profile::ALL[p];
        let profile = if n < profile.min_points() { Profile::Generic } else { profile };
        random_space(n, profile, seed).unwrap()
    })
}

fn any_permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|m| Permutation::new(m).unwrap())
}

fn space_and_permutation(max_n: usize) -> impl Strategy<Value = (PseudometricSpace, Permutation)> {
    any_space(max_n).prop_flat_map(|s| {
        let n = s.len();
        (Just(s), any_permutation(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn relation_and_partition_round_trip(s in any_space(7)) {
        let q = zero_partition(&s);
        let back = partition_from_relation(&relation_from_partition(&q));
        prop_assert_eq!(back, q);
    }

    #[test]
    fn one_sided_inclusion_forces_equality(a in any_space(6), b in any_space(6)) {
        let (p, q) = (fiber_partition(&a), fiber_partition(&b));
        if p.ground() == q.ground() {
            let included = p.blocks().iter().all(|blk| q.contains_block(blk));
            prop_assert_eq!(included, partitions_equal(&p, &q).unwrap());
            prop_assert_eq!(included, p == q);
        }
    }

    #[test]
    fn fibers_refine_the_two_block_split(s in any_space(7)) {
        let q = zero_partition(&s);
        let fibers = fiber_partition(&s);
        prop_assert!(fibers.refines(&otimes2(&q)));
        prop_assert!(otimes1(&q).refines(&otimes2(&q)));
        // the zero fiber is the zero-relation itself
        let diagonal: Vec<(usize, usize)> = relation_from_partition(&q).pairs().iter().copied().collect();
        prop_assert!(fibers.contains_block(&diagonal));
    }

    #[test]
    fn induced_map_agrees_with_four_point_test((s, p) in space_and_permutation(6)) {
        prop_assert_eq!(
            is_self_similarity(&s, &p).unwrap(),
            is_self_similarity_quadruple(&s, &p).unwrap()
        );
    }

    #[test]
    fn pseudoidentities_are_self_similarities((s, p) in space_and_permutation(7)) {
        if is_pseudoidentity(&s, &p) {
            prop_assert!(is_self_similarity(&s, &p).unwrap());
        }
    }

    #[test]
    fn self_similarity_is_conjugation_stable((s, p) in space_and_permutation(6), sigma in any_permutation(6)) {
        let n = s.len();
        let sigma = Permutation::new(sigma.mapping().iter().copied().filter(|&i| i < n).collect()).unwrap();
        let moved = s.relabeled(sigma.mapping());
        let conjugate = sigma.compose(&p).compose(&sigma.inverse());
        prop_assert_eq!(
            is_self_similarity(&s, &p).unwrap(),
            is_self_similarity(&moved, &conjugate).unwrap()
        );
    }

    #[test]
    fn self_similarities_permute_zero_classes(s in any_space(6)) {
        let q = zero_partition(&s);
        for phi in cs_group(&s, 8).unwrap().elements() {
            prop_assert_eq!(q.map(|&x| phi.apply(x)), q.clone());
        }
    }

    #[test]
    fn pseudoidentity_group_order_is_product_of_factorials(s in any_space(6)) {
        let expected: u128 = zero_partition(&s).block_sizes().iter().map(|&k| factorial(k)).product();
        prop_assert_eq!(pi_group(&s, 8).unwrap().order() as u128, expected);
    }

    #[test]
    fn distinct_class_sizes_give_cs_equal_pi(s in any_space(6)) {
        if block_sizes_distinct(&s) {
            prop_assert_eq!(cs_group(&s, 8).unwrap(), pi_group(&s, 8).unwrap());
        }
    }

    #[test]
    fn reflection_is_idempotent(s in any_space(8)) {
        let once = metric_reflection(&s).space;
        let twice = metric_reflection(&once);
        prop_assert_eq!(&twice.space, &once);
        prop_assert_eq!(twice.projection, (0..once.len()).collect::<Vec<_>>());
    }

    #[test]
    fn classes_transfer_to_the_reflection(s in any_space(8)) {
        let r = metric_reflection(&s).space;
        prop_assert_eq!(is_discrete_structural(&s), is_discrete_structural(&r));
        prop_assert_eq!(is_strongly_rigid_structural(&s), is_strongly_rigid_structural(&r));
        prop_assert_eq!(is_pseudorectangle_structural(&s), is_pseudorectangle_structural(&r));
    }

    /// A nonzero fiber is a single block-pair rectangle exactly when the
    /// strong-rigidity condition holds on all quadruples at that value.
    #[test]
    fn single_fiber_rectangle_condition(s in any_space(7)) {
        let q = zero_partition(&s);
        for t in s.range().values().iter().filter(|t| !t.is_zero()) {
            let fiber = s.fiber(t).unwrap();
            let condition = fiber.iter().all(|&(x, y)| fiber.iter().all(|&(u, v)| {
                (s.is_zero(x, u) && s.is_zero(y, v)) || (s.is_zero(x, v) && s.is_zero(y, u))
            }));
            let (x, y) = fiber[0];
            let (bx, by) = (q.block_of(&x).unwrap(), q.block_of(&y).unwrap());
            let mut rectangle: Vec<(usize, usize)> = q.blocks()[bx]
                .iter()
                .flat_map(|&a| q.blocks()[by].iter().flat_map(move |&b| [(a, b), (b, a)]))
                .collect();
            rectangle.sort();
            prop_assert_eq!(condition, fiber == rectangle);
        }
    }

    #[test]
    fn strongly_rigid_constructor_round_trips(n in 1usize..=8, seed: u64, values: u64) {
        let rel = random_relation(n, seed).unwrap();
        let s = strongly_rigid_from_relation(&rel, values).unwrap();
        prop_assert_eq!(labeled_zero_relation(&s), rel.clone());
        prop_assert!(is_strongly_rigid_definitional(&s));
        let d = discrete_from_relation(&rel).unwrap();
        prop_assert_eq!(labeled_zero_relation(&d), rel);
        let (one, two) = (Rational::from(1), Rational::from(2));
        prop_assert!(s.range().values().iter().all(|t| t.is_zero() || (*t > one && *t < two)));
    }

    #[test]
    fn pseudorectangle_constructor_round_trips(n in 4usize..=8, seed: u64, values: u64) {
        let rel = random_four_block_relation(n, seed).unwrap();
        let s = pseudorectangle_from_relation(&rel, values).unwrap();
        prop_assert_eq!(labeled_zero_relation(&s), rel);
        prop_assert!(is_pseudorectangle_structural(&s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn witnesses_verify_and_transport_zero_classes((s, p) in space_and_permutation(6)) {
        let moved = s.relabeled(p.mapping()).map_values(|t| t + t).unwrap();
        let w = find_similarity(&s, &moved, 12).unwrap().expect("a relabeled rescaled copy is similar");
        prop_assert!(w.verify(&s, &moved));
        prop_assert!(w.value_map(&Rational::zero()).unwrap().is_zero());
        prop_assert!(transports_zero_classes(&w, &s, &moved));
    }

    #[test]
    fn similarity_is_an_equivalence(a in any_space(5), b in any_space(5), c in any_space(5)) {
        let ab = find_similarity(&a, &b, 12).unwrap();
        let ba = find_similarity(&b, &a, 12).unwrap();
        prop_assert_eq!(ab.is_some(), ba.is_some());
        if let Some(w) = &ab {
            prop_assert!(w.inverse().verify(&b, &a));
        }
        prop_assert!(find_similarity(&a, &a, 12).unwrap().is_some());
        if let (Some(x), Some(y)) = (&ab, find_similarity(&b, &c, 12).unwrap()) {
            let composite = x.then(&y);
            prop_assert!(composite.verify(&a, &c));
        }
    }
}

#[test]
fn cs_sits_between_pi_and_sym() {
    for seed in 0..60 {
        let s = random_space(1 + (seed as usize % 6), Profile::Generic, seed).unwrap();
        let cs = cs_group(&s, 8).unwrap();
        let pi = pi_group(&s, 8).unwrap();
        assert!(pi.is_subgroup_of(&cs));
        assert_eq!(symmetric_group(s.len()).filter(|p| cs.contains(p)).count(), cs.order());
    }
}

#[test]
fn partition_equality_ignores_block_listing_order() {
    let p = Partition::new(0..4, vec![vec![3, 2], vec![1, 0]]).unwrap();
    let q = Partition::new(0..4, vec![vec![0, 1], vec![2, 3]]).unwrap();
    assert!(partitions_equal(&p, &q).unwrap());
}
