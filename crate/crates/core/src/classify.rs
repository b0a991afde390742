//! The metric reflection and the three classes: discrete, strongly rigid
//! and pseudorectangle.
//!
//! Each predicate comes in a definitional form, read straight off the
//! definition of the class, and a structural form comparing the fiber
//! partition of `X²` with a partition built from the zero-classes. The two
//! are computed independently; [`classify`] runs both and refuses to answer
//! when they disagree.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::groups::{cs_group, factorial, pi_group, GroupError};
use crate::partition::{
    fiber_partition, otimes1, otimes2, otimes3_ordered, partitions_equal, zero_partition, Partition,
};
use crate::rational::Rational;
use crate::space::PseudometricSpace;

/// `(X/≅₀, δ_d)` together with the canonical projection.
///
/// Classes are numbered by their smallest member and each is labeled with
/// that member's label, so a metric space reflects onto an identical copy.
#[derive(Debug, Clone)]
pub struct MetricReflection {
    pub space: PseudometricSpace,
    /// `projection[x]` is the class index of point `x`.
    pub projection: Vec<usize>,
    pub classes: Partition<usize>,
}

pub fn metric_reflection(space: &PseudometricSpace) -> MetricReflection {
    let classes = zero_partition(space);
    let mut projection = vec![0; space.len()];
    for (j, block) in classes.blocks().iter().enumerate() {
        for &x in block {
            projection[x] = j;
        }
    }
    let reps: Vec<usize> = classes.blocks().iter().map(|b| b[0]).collect();
    for x in 0..space.len() {
        for y in 0..space.len() {
            assert_eq!(
                space.distance(x, y),
                space.distance(reps[projection[x]], reps[projection[y]]),
                "distance must be constant on pairs of zero-classes"
            );
        }
    }
    let labels = reps.iter().map(|&r| space.label(r).to_string()).collect();
    let dist = reps
        .iter()
        .flat_map(|&a| reps.iter().map(move |&b| space.distance(a, b).clone()))
        .collect();
    let reflected = PseudometricSpace::from_row_major(labels, dist)
        .expect("the quotient of a pseudometric is a pseudometric");
    assert!(reflected.is_metric(), "the reflection must be a metric space");
    MetricReflection { space: reflected, projection, classes }
}

/// `|d(X²)| ≤ 2`.
pub fn is_discrete_definitional(space: &PseudometricSpace) -> bool {
    space.range().len() <= 2
}

/// `Q ⊗₂ Q = P_{d⁻¹}`.
pub fn is_discrete_structural(space: &PseudometricSpace) -> bool {
    let q = zero_partition(space);
    partitions_equal(&otimes2(&q), &fiber_partition(space)).expect("same ground")
}

/// `d(x,y) = d(u,v) ≠ 0` implies `d(x,u) = d(y,v) = 0` or `d(x,v) = d(y,u) = 0`.
///
/// Quadruples are only formed inside a single nonzero fiber.
pub fn is_strongly_rigid_definitional(space: &PseudometricSpace) -> bool {
    (1..space.range().len() as u32).all(|code| {
        let fiber = space.fiber_by_code(code);
        fiber.iter().all(|&(x, y)| {
            fiber.iter().all(|&(u, v)| {
                (space.is_zero(x, u) && space.is_zero(y, v)) || (space.is_zero(x, v) && space.is_zero(y, u))
            })
        })
    })
}

/// `Q ⊗₁ Q = P_{d⁻¹}`.
pub fn is_strongly_rigid_structural(space: &PseudometricSpace) -> bool {
    let q = zero_partition(space);
    partitions_equal(&otimes1(&q), &fiber_partition(space)).expect("same ground")
}

/// Counting form on the reflection: a finite metric space on `m` points is
/// strongly rigid iff it realizes `m(m−1)/2` distinct nonzero distances.
pub fn is_strongly_rigid_by_counting(space: &PseudometricSpace) -> bool {
    let refl = metric_reflection(space).space;
    let m = refl.len();
    refl.range().len() == m * (m - 1) / 2 + 1
}

fn sorted_triple(space: &PseudometricSpace, a: usize, b: usize, c: usize) -> [Rational; 3] {
    let mut t = [space.distance(a, b).clone(), space.distance(a, c).clone(), space.distance(b, c).clone()];
    t.sort();
    t
}

/// Every metric three-point subset is strongly rigid, and all of them have
/// the same sorted distance triple.
fn three_point_subspaces_rigid_and_isometric(space: &PseudometricSpace) -> bool {
    let n = space.len();
    let mut shape: Option<[Rational; 3]> = None;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if !space.is_metric_subset(&[a, b, c]) {
                    continue;
                }
                let t = sorted_triple(space, a, b, c);
                // a metric triangle is strongly rigid iff its sides are distinct
                if t[0] == t[1] || t[1] == t[2] {
                    return false;
                }
                match &shape {
                    None => shape = Some(t),
                    Some(s) if *s != t => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// A metric four-point subset within zero distance of every point.
fn has_dominating_metric_quadruple(space: &PseudometricSpace) -> bool {
    let n = space.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for e in c + 1..n {
                    let quad = [a, b, c, e];
                    if space.is_metric_subset(&quad)
                        && (0..n).all(|x| quad.iter().any(|&y| space.is_zero(x, y)))
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}

pub fn is_pseudorectangle_definitional(space: &PseudometricSpace) -> bool {
    three_point_subspaces_rigid_and_isometric(space) && has_dominating_metric_quadruple(space)
}

/// The 24 orderings of four blocks, generated locally so the structural
/// path never touches [`crate::groups::symmetric_group`].
fn orderings_of_four() -> impl Iterator<Item = [usize; 4]> {
    (0..4).flat_map(|a| {
        (0..4).flat_map(move |b| {
            (0..4).flat_map(move |c| (0..4).map(move |e| [a, b, c, e]))
        })
    })
    .filter(|o| o.iter().collect::<BTreeSet<_>>().len() == 4)
}

/// Four zero-classes, four distance values, and some ordering `X₁..X₄` of
/// the classes with `Q ⊗₃ Q = P_{d⁻¹}`.
pub fn is_pseudorectangle_structural(space: &PseudometricSpace) -> bool {
    let q = zero_partition(space);
    if q.len() != 4 || space.range().len() != 4 {
        return false;
    }
    let fibers = fiber_partition(space);
    orderings_of_four().any(|order| {
        let candidate = otimes3_ordered(&q, order).expect("four blocks");
        partitions_equal(&candidate, &fibers).expect("same ground")
    })
}

/// Through the reflection: a four-point reflection whose three-point
/// subspaces are all strongly rigid and isometric.
pub fn is_pseudorectangle_by_reflection(space: &PseudometricSpace) -> bool {
    let refl = metric_reflection(space).space;
    refl.len() == 4 && three_point_subspaces_rigid_and_isometric(&refl)
}

/// Whether `Cs` of the reflection is all of `Sym`, decided structurally.
pub fn reflection_sym_full(space: &PseudometricSpace) -> bool {
    is_discrete_structural(space) || is_strongly_rigid_structural(space) || is_pseudorectangle_structural(space)
}

/// Brute-force `|Cs(reflection)| = |reflection|!`.
pub fn reflection_sym_full_brute_force(space: &PseudometricSpace, bound: usize) -> Result<bool, GroupError> {
    let refl = metric_reflection(space).space;
    Ok(cs_group(&refl, bound)?.order() as u128 == factorial(refl.len()))
}

/// The zero-classes have pairwise distinct sizes.
pub fn block_sizes_distinct(space: &PseudometricSpace) -> bool {
    let sizes = zero_partition(space).block_sizes();
    sizes.windows(2).all(|w| w[0] != w[1])
}

/// Distinct class sizes and one of the three classes.
pub fn is_ip_structural(space: &PseudometricSpace) -> bool {
    block_sizes_distinct(space) && reflection_sym_full(space)
}

/// Distinct class sizes and `P_{d⁻¹} ∈ {Q⊗₁Q, Q⊗₂Q, Q⊗₃Q}`, the last under
/// some ordering of the four classes.
pub fn is_ip_fiber_form(space: &PseudometricSpace) -> bool {
    if !block_sizes_distinct(space) {
        return false;
    }
    let q = zero_partition(space);
    let fibers = fiber_partition(space);
    let eq = |p: &Partition<_>| partitions_equal(p, &fibers).expect("same ground");
    eq(&otimes1(&q))
        || eq(&otimes2(&q))
        || (q.len() == 4 && orderings_of_four().any(|o| eq(&otimes3_ordered(&q, o).expect("four blocks"))))
}

/// `Cs = PI` and `Cs(reflection) = Sym(reflection)`, by enumeration.
pub fn is_ip_definitional(space: &PseudometricSpace, bound: usize) -> Result<bool, GroupError> {
    let cs = cs_group(space, bound)?;
    let pi = pi_group(space, bound)?;
    Ok(cs == pi && reflection_sym_full_brute_force(space, bound)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Definitional,
    Structural,
    BothAgree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MethodTags {
    pub discrete: Method,
    pub strongly_rigid: Method,
    pub pseudorectangle: Method,
    pub ip: Method,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub is_discrete: bool,
    pub is_strongly_rigid: bool,
    pub is_pseudorectangle: bool,
    pub reflection_sym_full: bool,
    pub reflection_size: usize,
    pub range_size: usize,
    pub zero_block_sizes: Vec<usize>,
    pub cs_order: Option<usize>,
    pub pi_order: Option<usize>,
    pub ip_member: bool,
    pub method: MethodTags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Cap on `|X|` for the enumeration-based checks.
    pub bound: usize,
    /// Skip every definitional and brute-force computation.
    pub structural_only: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { bound: crate::groups::DEFAULT_BRUTE_FORCE_BOUND, structural_only: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("MethodDisagreement: {predicate} is {structural} structurally but {definitional} by definition")]
    MethodDisagreement { predicate: &'static str, structural: bool, definitional: bool },
}

fn agree(predicate: &'static str, structural: bool, definitional: bool) -> Result<bool, ClassifyError> {
    if structural == definitional {
        Ok(structural)
    } else {
        Err(ClassifyError::MethodDisagreement { predicate, structural, definitional })
    }
}

/// Runs every predicate, cross-checking methods unless `structural_only`.
///
/// Group orders and the definitional IP oracle are included only when
/// `|X|` is within the bound.
pub fn classify(space: &PseudometricSpace, options: ClassifyOptions) -> Result<ClassificationReport, ClassifyError> {
    let d_struct = is_discrete_structural(space);
    let sr_struct = is_strongly_rigid_structural(space);
    let pr_struct = is_pseudorectangle_structural(space);
    let ip_struct = is_ip_structural(space);
    agree("ip (fiber form)", ip_struct, is_ip_fiber_form(space))?;

    let both = if options.structural_only { Method::Structural } else { Method::BothAgree };
    let mut method = MethodTags { discrete: both, strongly_rigid: both, pseudorectangle: both, ip: Method::Structural };
    let (mut cs_order, mut pi_order) = (None, None);

    if !options.structural_only {
        agree("discrete", d_struct, is_discrete_definitional(space))?;
        agree("strongly rigid", sr_struct, is_strongly_rigid_definitional(space))?;
        agree("pseudorectangle", pr_struct, is_pseudorectangle_definitional(space))?;
        if space.len() <= options.bound {
            let cs = cs_group(space, options.bound).expect("within bound");
            let pi = pi_group(space, options.bound).expect("within bound");
            let ip_def = is_ip_definitional(space, options.bound).expect("within bound");
            agree("ip", ip_struct, ip_def)?;
            cs_order = Some(cs.order());
            pi_order = Some(pi.order());
            method.ip = Method::BothAgree;
        }
    }

    let refl = metric_reflection(space);
    Ok(ClassificationReport {
        is_discrete: d_struct,
        is_strongly_rigid: sr_struct,
        is_pseudorectangle: pr_struct,
        reflection_sym_full: d_struct || sr_struct || pr_struct,
        reflection_size: refl.space.len(),
        range_size: space.range().len(),
        zero_block_sizes: refl.classes.block_sizes(),
        cs_order,
        pi_order,
        ip_member: ip_struct,
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::enumeration_count;

    fn space(labels: &str, rows: &[&[i64]]) -> PseudometricSpace {
        PseudometricSpace::validate(
            labels.chars().map(String::from).collect(),
            rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect(),
        )
        .unwrap()
    }

    fn uniform(n: usize, value: i64) -> PseudometricSpace {
        let rows: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { 0 } else { value }).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        space(&"abcdefghij"[..n], &refs)
    }

    fn blocks() -> PseudometricSpace {
        space("abc", &[&[0, 1, 1], &[1, 0, 0], &[1, 0, 0]])
    }

    fn rectangle() -> PseudometricSpace {
        space("abcd", &[&[0, 3, 5, 4], &[3, 0, 4, 5], &[5, 4, 0, 3], &[4, 5, 3, 0]])
    }

    /// The rectangle with its vertices inflated to zero-classes of sizes 1, 2, 3, 4.
    fn inflated_rectangle() -> PseudometricSpace {
        let vertex = [0, 1, 1, 2, 2, 2, 3, 3, 3, 3];
        let base = rectangle();
        let dist = (0..10)
            .flat_map(|x| (0..10).map(move |y| (x, y)))
            .map(|(x, y)| base.distance(vertex[x], vertex[y]).clone())
            .collect();
        PseudometricSpace::from_row_major((0..10).map(|i| format!("p{i}")).collect(), dist).unwrap()
    }

    fn all_methods(s: &PseudometricSpace) -> (bool, bool, bool) {
        let d = is_discrete_definitional(s);
        assert_eq!(d, is_discrete_structural(s));
        let sr = is_strongly_rigid_definitional(s);
        assert_eq!(sr, is_strongly_rigid_structural(s));
        assert_eq!(sr, is_strongly_rigid_by_counting(s));
        let pr = is_pseudorectangle_definitional(s);
        assert_eq!(pr, is_pseudorectangle_structural(s));
        assert_eq!(pr, is_pseudorectangle_by_reflection(s));
        (d, sr, pr)
    }

    #[test]
    fn reflection_examples() {
        let r = metric_reflection(&rectangle());
        assert_eq!(r.space, rectangle());
        assert_eq!(r.projection, vec![0, 1, 2, 3]);

        let r = metric_reflection(&uniform(5, 0));
        assert_eq!(r.space.len(), 1);
        assert_eq!(r.projection, vec![0; 5]);

        let r = metric_reflection(&blocks());
        assert_eq!(r.space.len(), 2);
        assert_eq!(r.space.distance(0, 1), &Rational::from(1));
        assert_eq!(r.projection, vec![0, 1, 1]);
        assert_eq!(r.space.labels(), &["a", "b"]);
    }

    #[test]
    fn zero_pseudometric_is_discrete_and_strongly_rigid() {
        assert_eq!(all_methods(&uniform(4, 0)), (true, true, false));
    }

    #[test]
    fn equidistant_metric() {
        assert_eq!(all_methods(&uniform(4, 1)), (true, false, false));
        assert_eq!(all_methods(&uniform(3, 1)), (true, false, false));
        assert_eq!(all_methods(&uniform(2, 1)), (true, true, false));
    }

    #[test]
    fn triangle_345_is_strongly_rigid() {
        let s = space("abc", &[&[0, 3, 4], &[3, 0, 5], &[4, 5, 0]]);
        assert_eq!(all_methods(&s), (false, true, false));
    }

    #[test]
    fn rectangle_is_pseudorectangle() {
        assert_eq!(all_methods(&rectangle()), (false, false, true));
        assert_eq!(all_methods(&inflated_rectangle()), (false, false, true));
    }

    #[test]
    fn reflection_sym_full_examples() {
        let point = uniform(1, 0);
        assert!(reflection_sym_full(&point));
        assert!(reflection_sym_full_brute_force(&point, 8).unwrap());
        assert!(reflection_sym_full(&rectangle()));
        assert!(reflection_sym_full_brute_force(&rectangle(), 8).unwrap());
        // a matching of two short edges, every other pair at 3
        let s = space("abcd", &[&[0, 2, 3, 3], &[2, 0, 3, 3], &[3, 3, 0, 2], &[3, 3, 2, 0]]);
        assert!(!reflection_sym_full(&s));
        assert!(!reflection_sym_full_brute_force(&s, 8).unwrap());
    }

    #[test]
    fn ip_examples() {
        for (s, expected) in [(uniform(1, 0), true), (uniform(2, 1), false), (blocks(), true)] {
            assert_eq!(is_ip_structural(&s), expected);
            assert_eq!(is_ip_fiber_form(&s), expected);
            assert_eq!(is_ip_definitional(&s, 8).unwrap(), expected);
        }
        assert!(is_ip_structural(&inflated_rectangle()));
        assert!(!is_ip_structural(&rectangle()));
    }

    #[test]
    fn structural_path_never_enumerates() {
        let before = enumeration_count();
        let s = inflated_rectangle();
        assert!(is_ip_structural(&s));
        assert!(is_ip_fiber_form(&s));
        let report =
            classify(&s, ClassifyOptions { bound: 8, structural_only: true }).unwrap();
        assert_eq!(report.cs_order, None);
        assert_eq!(enumeration_count(), before);
    }

    #[test]
    fn report_for_blocks() {
        let report = classify(&blocks(), ClassifyOptions::default()).unwrap();
        assert!(report.is_discrete && report.ip_member && !report.is_pseudorectangle);
        assert_eq!(report.zero_block_sizes, vec![1, 2]);
        assert_eq!((report.cs_order, report.pi_order), (Some(2), Some(2)));
        assert_eq!(report.method.ip, Method::BothAgree);
        assert_eq!(report.reflection_size, 2);
        assert_eq!(report.range_size, 2);
    }

    #[test]
    fn method_tags_serialize_kebab_case() {
        assert_eq!(serde_json::to_string(&Method::BothAgree).unwrap(), "\"both-agree\"");
    }
}
