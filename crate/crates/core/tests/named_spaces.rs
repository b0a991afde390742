use pseudometric::classify::{classify, is_pseudorectangle_structural, metric_reflection, ClassifyOptions};
use pseudometric::construct::{near_miss, ClassTag, pseudorectangle_from_relation, random_space, Profile};
use pseudometric::groups::{cs_group, is_self_similarity, kernel, lift_self_similarity, pi_group, reflection_hom, Permutation};
use pseudometric::similarity::{are_pseudoisometric, find_similarity};
use pseudometric::{Partition, PseudometricSpace, Rational};

fn space(labels: &str, rows: &[&[i64]]) -> PseudometricSpace {
    PseudometricSpace::validate(
        labels.chars().map(String::from).collect(),
        rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect(),
    )
    .unwrap()
}

fn rectangle() -> PseudometricSpace {
    space("abcd", &[&[0, 3, 5, 4], &[3, 0, 4, 5], &[5, 4, 0, 3], &[4, 5, 3, 0]])
}

#[test]
fn constructed_rectangle_is_similar_to_the_345_rectangle() {
    let rel = Partition::from_blocks(vec![vec!["a"], vec!["b"], vec!["c"], vec!["d"]]).unwrap().to_relation();
    let s = pseudorectangle_from_relation(&rel, 0).unwrap();
    let w = find_similarity(&rectangle(), &metric_reflection(&s).space, 12).unwrap().unwrap();
    assert!(w.verify(&rectangle(), &metric_reflection(&s).space));
    assert!(!are_pseudoisometric(&rectangle(), &s, 12).unwrap());
}

#[test]
fn rectangle_report() {
    let report = classify(&rectangle(), ClassifyOptions::default()).unwrap();
    assert!(report.is_pseudorectangle && !report.is_discrete && !report.is_strongly_rigid);
    assert_eq!(report.range_size, 4);
    assert_eq!(report.cs_order, Some(24));
    assert_eq!(report.pi_order, Some(1));
    assert!(!report.ip_member);
}

#[test]
fn lifting_a_class_swap() {
    // {a, d} at distance 0, b and c apart; classes {a, d}, {b}, {c}
    let s = space("abcd", &[&[0, 1, 1, 0], &[1, 0, 1, 1], &[1, 1, 0, 1], &[0, 1, 1, 0]]);
    let swap_bc_classes = Permutation::transposition(3, 1, 2);
    let phi = Permutation::transposition(4, 1, 2);
    assert!(lift_self_similarity(&s, &swap_bc_classes, &phi).unwrap());
    assert!(is_self_similarity(&s, &phi).unwrap());
    let hom = reflection_hom(&s, 8).unwrap();
    assert_eq!(kernel(&hom), pi_group(&s, 8).unwrap());
    assert_eq!(hom.image_of(&phi), Some(&swap_bc_classes));
    assert_eq!(cs_group(&s, 8).unwrap().order(), 4);
}

#[test]
fn seeded_profiles_at_five_points() {
    let rigid = random_space(5, Profile::StronglyRigid, 42).unwrap();
    assert!(classify(&rigid, ClassifyOptions::default()).unwrap().is_strongly_rigid);
    let miss = near_miss(5, 42).unwrap();
    assert!(!miss.broken.contains(&miss.space));
    let report = classify(&miss.space, ClassifyOptions::default()).unwrap();
    let still_in_class = match miss.broken {
        ClassTag::Discrete => report.is_discrete,
        ClassTag::StronglyRigid => report.is_strongly_rigid,
        ClassTag::PseudorectangleOrRigid4 => report.is_pseudorectangle,
    };
    assert!(!still_in_class);
}

#[test]
fn inflated_rectangle_is_ip() {
    let rel = Partition::from_blocks(vec![
        vec!["a"],
        vec!["b", "c"],
        vec!["d", "e", "f"],
        vec!["g", "h", "i", "j"],
    ])
    .unwrap()
    .to_relation();
    let s = pseudorectangle_from_relation(&rel, 11).unwrap();
    assert!(is_pseudorectangle_structural(&s));
    let report = classify(&s, ClassifyOptions { bound: 8, structural_only: false }).unwrap();
    assert!(report.ip_member);
    assert_eq!(report.cs_order, None);
    assert_eq!(report.zero_block_sizes, vec![1, 2, 3, 4]);
}
