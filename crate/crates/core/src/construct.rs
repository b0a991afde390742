//! Generators: a pseudometric with a prescribed zero-relation in each of
//! the three classes, seeded random spaces, and sampled closure checks.
//!
//! # Reproducibility
//!
//! All randomness comes from [`Stream`]: SplitMix64 seeded with the 64-bit
//! seed as its initial state. Two derived operations are fixed here so that
//! outputs depend only on the seed:
//!
//! * `below(n)` is `(next_u64() as u128 * n as u128) >> 64`;
//! * `shuffle` is Fisher–Yates, swapping index `i` with `below(i + 1)` for
//!   `i` from `len − 1` down to `1`.
//!
//! Nonzero values are drawn from the schedule `1 + k/(K+1)`, `k = 1..=K`,
//! which lies in the open interval `(1, 2)`; any three such values satisfy
//! the triangle inequality since `a + b > 2 > c`.

use std::collections::BTreeSet;
use std::fmt::{Debug, Display};

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{
    is_discrete_structural, is_pseudorectangle_structural, is_strongly_rigid_structural, metric_reflection,
};
use crate::partition::{zero_partition, EquivalenceRelation, Partition};
use crate::rational::Rational;
use crate::similarity::identity_similarity_from_fibers;
use crate::space::{PseudometricSpace, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("WrongBlockCount: expected 4 blocks, found {found}")]
    WrongBlockCount { found: usize },
    #[error("BadSize: {reason}")]
    BadSize { reason: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// The seeded pseudorandom stream described in the module docs.
pub struct Stream(SplitMix64);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform-ish draw from `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}

/// `1 + k/(K+1)` for `k = 1..=K`, in increasing order.
pub fn value_schedule(count: usize) -> Vec<Rational> {
    let denom = count as i64 + 1;
    (1..=count as i64).map(|k| Rational::new(denom + k, denom)).collect()
}

fn shuffled_schedule(count: usize, rng: &mut Stream) -> Vec<Rational> {
    let mut values = value_schedule(count);
    rng.shuffle(&mut values);
    values
}

/// Index of the unordered pair `j1 < j2` among `m` blocks, in lexicographic order.
fn pair_index(m: usize, j1: usize, j2: usize) -> usize {
    debug_assert!(j1 < j2 && j2 < m);
    j1 * m - j1 * (j1 + 1) / 2 + (j2 - j1 - 1)
}

/// Index of the perfect matching of four blocks containing the pair
/// `{j1, j2}`: 0 for `{01, 23}`, 1 for `{02, 13}`, 2 for `{03, 12}`.
fn matching_index(j1: usize, j2: usize) -> usize {
    let partner_of_first = if j1 == 0 {
        j2
    } else if j2 == 0 {
        j1
    } else {
        6 - j1 - j2
    };
    partner_of_first - 1
}

/// The space with `d(x, y) = value(j1, j2)` for points in blocks
/// `j1 < j2`, and 0 within a block.
fn from_block_values<F: Fn(usize, usize) -> Rational>(
    labels: Vec<String>,
    class_of: &[usize],
    value: F,
) -> Result<PseudometricSpace, SpaceError> {
    let n = labels.len();
    let dist = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| {
            let (a, b) = (class_of[x], class_of[y]);
            match a.cmp(&b) {
                std::cmp::Ordering::Equal => Rational::zero(),
                std::cmp::Ordering::Less => value(a, b),
                std::cmp::Ordering::Greater => value(b, a),
            }
        })
        .collect();
    PseudometricSpace::from_row_major(labels, dist)
}

/// Labels and block indices of a relation, in ground order.
fn layout<T: Ord + Clone + Debug + Display>(rel: &EquivalenceRelation<T>) -> (Vec<String>, Vec<usize>, usize) {
    let part = rel.to_partition();
    let labels = part.ground().iter().map(ToString::to_string).collect();
    let class_of = part.ground().iter().map(|x| part.block_of(x).expect("ground element")).collect();
    (labels, class_of, part.len())
}

/// Discrete pseudometric: 0 inside blocks, 1 across.
pub fn discrete_from_relation<T: Ord + Clone + Debug + Display>(
    rel: &EquivalenceRelation<T>,
) -> Result<PseudometricSpace, ConstructError> {
    let (labels, class_of, _) = layout(rel);
    Ok(from_block_values(labels, &class_of, |_, _| Rational::from(1))?)
}

/// Strongly rigid pseudometric: a distinct value of the shuffled schedule
/// for each unordered pair of blocks, taken in lexicographic order.
pub fn strongly_rigid_from_relation<T: Ord + Clone + Debug + Display>(
    rel: &EquivalenceRelation<T>,
    seed: u64,
) -> Result<PseudometricSpace, ConstructError> {
    let (labels, class_of, m) = layout(rel);
    let values = shuffled_schedule(m * m.saturating_sub(1) / 2, &mut Stream::new(seed));
    Ok(from_block_values(labels, &class_of, |a, b| values[pair_index(m, a, b)].clone())?)
}

/// Pseudorectangle: the three perfect matchings of the four blocks get
/// the shuffled schedule values in the order `{X₁X₂, X₃X₄}`,
/// `{X₁X₃, X₂X₄}`, `{X₁X₄, X₂X₃}`.
pub fn pseudorectangle_from_relation<T: Ord + Clone + Debug + Display>(
    rel: &EquivalenceRelation<T>,
    seed: u64,
) -> Result<PseudometricSpace, ConstructError> {
    let (labels, class_of, m) = layout(rel);
    if m != 4 {
        return Err(ConstructError::WrongBlockCount { found: m });
    }
    let values = shuffled_schedule(3, &mut Stream::new(seed));
    Ok(from_block_values(labels, &class_of, |a, b| values[matching_index(a, b)].clone())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    Generic,
    Discrete,
    StronglyRigid,
    Pseudorectangle,
    NearMiss,
}

impl Profile {
    pub const ALL: [Profile; 5] =
        [Profile::Generic, Profile::Discrete, Profile::StronglyRigid, Profile::Pseudorectangle, Profile::NearMiss];

    /// Smallest `n` the profile can produce.
    pub fn min_points(self) -> usize {
        match self {
            Profile::Pseudorectangle => 4,
            Profile::NearMiss => 3,
            _ => 1,
        }
    }
}

/// A classification the generators and closure checks target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassTag {
    Discrete,
    StronglyRigid,
    /// Pseudorectangles together with strongly rigid spaces of at most four distance values.
    PseudorectangleOrRigid4,
}

impl ClassTag {
    pub fn contains(self, space: &PseudometricSpace) -> bool {
        match self {
            ClassTag::Discrete => is_discrete_structural(space),
            ClassTag::StronglyRigid => is_strongly_rigid_structural(space),
            ClassTag::PseudorectangleOrRigid4 => {
                is_pseudorectangle_structural(space)
                    || (is_strongly_rigid_structural(space) && space.range().len() <= 4)
            }
        }
    }
}

fn point_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Random block assignment for `n` points into `1..=n` blocks.
///
/// Half the time points are spread uniformly; otherwise blocks get the
/// pairwise distinct sizes `1, 2, …, k−1` and the remainder.
fn random_classes(n: usize, rng: &mut Stream) -> Vec<usize> {
    let mut class_of: Vec<usize> = if rng.coin() {
        let k = 1 + rng.below(n);
        (0..n).map(|_| rng.below(k)).collect()
    } else {
        let cap = (1..=n).take_while(|k| k * (k + 1) / 2 <= n).last().unwrap_or(1);
        let k = 1 + rng.below(cap);
        let mut sizes: Vec<usize> = (1..k).collect();
        sizes.push(n - (k - 1) * k / 2);
        let mut out: Vec<usize> = sizes.iter().enumerate().flat_map(|(j, &s)| std::iter::repeat_n(j, s)).collect();
        rng.shuffle(&mut out);
        out
    };
    renumber(&mut class_of);
    class_of
}

/// Exactly four nonempty blocks.
fn random_four_classes(n: usize, rng: &mut Stream) -> Vec<usize> {
    let mut class_of: Vec<usize> = if n >= 10 && rng.coin() {
        let mut v: Vec<usize> = [(0, 1), (1, 2), (2, 3), (3, n - 6)]
            .iter()
            .flat_map(|&(j, s)| std::iter::repeat_n(j, s))
            .collect();
        rng.shuffle(&mut v);
        v
    } else {
        let mut v: Vec<usize> = (0..n).map(|i| if i < 4 { i } else { rng.below(4) }).collect();
        rng.shuffle(&mut v);
        v
    };
    renumber(&mut class_of);
    class_of
}

/// Renames blocks by first appearance and drops empty ones.
fn renumber(class_of: &mut [usize]) -> usize {
    let mut names: Vec<Option<usize>> = vec![None; class_of.len() + 1];
    let mut next = 0;
    for c in class_of.iter_mut() {
        let name = *names[*c].get_or_insert_with(|| {
            next += 1;
            next - 1
        });
        *c = name;
    }
    next
}

fn block_count(class_of: &[usize]) -> usize {
    class_of.iter().copied().max().map_or(0, |m| m + 1)
}

fn bad_size(reason: impl Into<String>) -> ConstructError {
    ConstructError::BadSize { reason: reason.into() }
}

/// A structured space with one hypothesis deliberately broken.
#[derive(Debug, Clone)]
pub struct NearMiss {
    pub space: PseudometricSpace,
    /// The class the space was derived from and no longer belongs to.
    pub broken: ClassTag,
}

/// Builds a near miss on `n ≥ 3` points.
///
/// One of: a strongly rigid space with one pair value duplicated; a
/// pseudorectangle with one block pair moved to a fresh value; a discrete
/// space with one block pair moved to a second nonzero value.
pub fn near_miss(n: usize, seed: u64) -> Result<NearMiss, ConstructError> {
    if n < 3 {
        return Err(bad_size(format!("near-miss needs at least 3 points, got {n}")));
    }
    let mut rng = Stream::new(seed);
    let variant = rng.below(if n >= 4 { 3 } else { 2 });
    let (class_of, m) = {
        let mut c = if variant == 2 { random_four_classes(n, &mut rng) } else { random_classes(n, &mut rng) };
        // at least three blocks keep every variant attributable
        if block_count(&c) < 3 {
            c = (0..n).map(|i| i % 3).collect();
            rng.shuffle(&mut c);
            renumber(&mut c);
        }
        let m = block_count(&c);
        (c, m)
    };
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    let target = pairs[rng.below(pairs.len())];
    let labels = point_labels(n);
    let (space, broken) = match variant {
        0 => {
            let values = shuffled_schedule(pairs.len(), &mut rng);
            let mut donor = pairs[rng.below(pairs.len())];
            while donor == target {
                donor = pairs[rng.below(pairs.len())];
            }
            let copied = values[pair_index(m, donor.0, donor.1)].clone();
            let s = from_block_values(labels, &class_of, |a, b| {
                if (a, b) == target {
                    copied.clone()
                } else {
                    values[pair_index(m, a, b)].clone()
                }
            })?;
            (s, ClassTag::StronglyRigid)
        }
        1 => {
            let s = from_block_values(labels, &class_of, |a, b| {
                if (a, b) == target {
                    Rational::new(3, 2)
                } else {
                    Rational::from(1)
                }
            })?;
            (s, ClassTag::Discrete)
        }
        _ => {
            let values = shuffled_schedule(4, &mut rng);
            let s = from_block_values(labels, &class_of, |a, b| {
                if (a, b) == target {
                    values[3].clone()
                } else {
                    values[matching_index(a, b)].clone()
                }
            })?;
            (s, ClassTag::PseudorectangleOrRigid4)
        }
    };
    Ok(NearMiss { space, broken })
}

/// A seeded random space on `n` points labeled `p0, p1, …`.
pub fn random_space(n: usize, profile: Profile, seed: u64) -> Result<PseudometricSpace, ConstructError> {
    if n < profile.min_points() {
        return Err(bad_size(format!("{profile:?} needs at least {} points, got {n}", profile.min_points())));
    }
    let mut rng = Stream::new(seed);
    let labels = point_labels(n);
    let space = match profile {
        Profile::Generic => {
            let class_of = random_classes(n, &mut rng);
            let m = block_count(&class_of);
            let pairs = m * (m - 1) / 2;
            let distinct = 1 + rng.below(pairs.max(1));
            let values = shuffled_schedule(distinct, &mut rng);
            let picks: Vec<usize> = (0..pairs).map(|_| rng.below(distinct)).collect();
            from_block_values(labels, &class_of, |a, b| values[picks[pair_index(m, a, b)]].clone())?
        }
        Profile::Discrete => {
            let class_of = random_classes(n, &mut rng);
            from_block_values(labels, &class_of, |_, _| Rational::from(1))?
        }
        Profile::StronglyRigid => {
            let class_of = random_classes(n, &mut rng);
            let m = block_count(&class_of);
            let values = shuffled_schedule(m * (m - 1) / 2, &mut rng);
            from_block_values(labels, &class_of, |a, b| values[pair_index(m, a, b)].clone())?
        }
        Profile::Pseudorectangle => {
            let class_of = random_four_classes(n, &mut rng);
            let values = shuffled_schedule(3, &mut rng);
            from_block_values(labels, &class_of, |a, b| values[matching_index(a, b)].clone())?
        }
        Profile::NearMiss => near_miss(n, rng.next_u64())?.space,
    };
    Ok(space)
}

/// A random equivalence relation on `p0 … p{n−1}`.
pub fn random_relation(n: usize, seed: u64) -> Result<EquivalenceRelation<String>, ConstructError> {
    if n == 0 {
        return Err(bad_size("a relation needs at least one point"));
    }
    let class_of = random_classes(n, &mut Stream::new(seed));
    Ok(relation_from_classes(&point_labels(n), &class_of))
}

/// A random relation with exactly four blocks, `n ≥ 4`.
pub fn random_four_block_relation(n: usize, seed: u64) -> Result<EquivalenceRelation<String>, ConstructError> {
    if n < 4 {
        return Err(bad_size(format!("four blocks need at least 4 points, got {n}")));
    }
    let class_of = random_four_classes(n, &mut Stream::new(seed));
    Ok(relation_from_classes(&point_labels(n), &class_of))
}

fn relation_from_classes(labels: &[String], class_of: &[usize]) -> EquivalenceRelation<String> {
    let m = block_count(class_of);
    let mut blocks: Vec<Vec<String>> = vec![Vec::new(); m];
    for (l, &c) in labels.iter().zip(class_of) {
        blocks[c].push(l.clone());
    }
    Partition::from_blocks(blocks).expect("blocks are disjoint and nonempty").to_relation()
}

/// The zero-relation of a space in terms of its labels.
pub fn labeled_zero_relation(space: &PseudometricSpace) -> EquivalenceRelation<String> {
    zero_partition(space).map(|&i| space.label(i).to_string()).to_relation()
}

/// Adds a copy of point `p` at distance 0 from it: a pseudoisometric
/// enlargement of the space.
pub fn inflate_point(space: &PseudometricSpace, p: usize) -> PseudometricSpace {
    let n = space.len();
    let mut labels = space.labels().to_vec();
    let mut name = format!("{}'", space.label(p));
    while labels.contains(&name) {
        name.push('\'');
    }
    labels.push(name);
    let source = |i: usize| if i == n { p } else { i };
    let dist = (0..=n)
        .flat_map(|x| (0..=n).map(move |y| (x, y)))
        .map(|(x, y)| space.distance(source(x), source(y)).clone())
        .collect();
    PseudometricSpace::from_row_major(labels, dist).expect("duplicating a point keeps the axioms")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureCondition {
    /// Invariance under pseudoisometries.
    Pseudoisometry,
    /// Equal zero-relations on one ground give the identity witness.
    IdentityWitness,
    /// Nonempty subspaces stay in the class.
    Subspaces,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("NotInClass: sample {index} is not in {tag:?}")]
    NotInClass { tag: ClassTag, index: usize },
    #[error("ClosureViolation: {condition:?} fails on {witness:?}")]
    ClosureViolation { condition: ClosureCondition, witness: Box<PseudometricSpace> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub tag: ClassTag,
    pub samples: usize,
    pub pseudoisometric_copies: usize,
    pub partners: usize,
    pub subspaces: usize,
}

/// Largest sample space whose subspaces are all enumerated.
pub const SUBSPACE_ENUMERATION_CAP: usize = 12;

/// Checks the three closure conditions of a class on a sample.
///
/// * pseudoisometry: the reflection, a shuffled copy and a copy with one
///   point doubled stay in the class;
/// * identity witness: partners on the same ground with the same
///   zero-relation, built by the class constructor under a fresh seed and
///   by doubling every value, admit `Id` as a similarity;
/// * subspaces: every nonempty subspace stays in the class (only for
///   samples up to [`SUBSPACE_ENUMERATION_CAP`] points).
pub fn check_class_closure(
    tag: ClassTag,
    sample: &[PseudometricSpace],
    seed: u64,
) -> Result<ClosureReport, ClosureError> {
    let mut rng = Stream::new(seed);
    let mut report = ClosureReport { tag, samples: sample.len(), pseudoisometric_copies: 0, partners: 0, subspaces: 0 };
    let violation = |condition, s: &PseudometricSpace| ClosureError::ClosureViolation {
        condition,
        witness: Box::new(s.clone()),
    };
    for (index, s) in sample.iter().enumerate() {
        if !tag.contains(s) {
            return Err(ClosureError::NotInClass { tag, index });
        }

        let mut perm: Vec<usize> = (0..s.len()).collect();
        rng.shuffle(&mut perm);
        let copies = [
            metric_reflection(s).space,
            s.relabeled(&perm),
            inflate_point(s, rng.below(s.len())),
        ];
        for c in &copies {
            if !tag.contains(c) {
                return Err(violation(ClosureCondition::Pseudoisometry, c));
            }
            report.pseudoisometric_copies += 1;
        }

        let rel = labeled_zero_relation(s);
        let fresh = rng.next_u64();
        let rebuilt = match tag {
            ClassTag::Discrete => discrete_from_relation(&rel),
            ClassTag::StronglyRigid => strongly_rigid_from_relation(&rel, fresh),
            ClassTag::PseudorectangleOrRigid4 if rel.to_partition().len() == 4 => {
                pseudorectangle_from_relation(&rel, fresh)
            }
            ClassTag::PseudorectangleOrRigid4 => strongly_rigid_from_relation(&rel, fresh),
        }
        .expect("constructors accept any relation of the right block count");
        let doubled = s.map_values(|t| t + t).expect("scaling keeps the axioms");
        for partner in [rebuilt, doubled] {
            if !tag.contains(&partner) {
                return Err(violation(ClosureCondition::IdentityWitness, &partner));
            }
            let found = identity_similarity_from_fibers(s, &partner).expect("same labels");
            if found.is_none() {
                return Err(violation(ClosureCondition::IdentityWitness, &partner));
            }
            report.partners += 1;
        }

        if s.len() <= SUBSPACE_ENUMERATION_CAP {
            for mask in 1u32..(1 << s.len()) {
                let indices: Vec<usize> = (0..s.len()).filter(|i| mask >> i & 1 == 1).collect();
                let sub = s.subspace_by_index(&indices).expect("nonempty");
                if !tag.contains(&sub) {
                    return Err(violation(ClosureCondition::Subspaces, &sub));
                }
                report.subspaces += 1;
            }
        }
    }
    Ok(report)
}

/// Distinct nonzero values of a space, for tests on the schedule.
pub fn nonzero_values(space: &PseudometricSpace) -> BTreeSet<Rational> {
    space.range().values().iter().filter(|t| !t.is_zero()).cloned().collect()
}
