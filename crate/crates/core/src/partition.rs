//! Partitions, equivalence relations, and the partitions of `X²` that the
//! class characterizations compare against the fiber partition `P_{d⁻¹}`.
//!
//! A [`Partition`] stores its ground set sorted and its blocks normalized:
//! each block sorted, blocks ordered by their smallest element. Two
//! partitions of the same ground set are therefore equal exactly when their
//! block vectors are equal, and a block can be looked up by binary search.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use thiserror::Error;

use crate::space::{Pair, PseudometricSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("EmptyBlock at index {0}")]
    EmptyBlock(usize),
    #[error("Overlap: element {0} lies in more than one block")]
    Overlap(String),
    #[error("NotCovering: element {0} lies in no block")]
    NotCovering(String),
    #[error("ForeignElement: element {0} is not in the ground set")]
    ForeignElement(String),
    #[error("GroundMismatch")]
    GroundMismatch,
    #[error("NotAnEquivalence: {0}")]
    NotAnEquivalence(EquivalenceFailure),
    #[error("WrongBlockCount: expected {expected}, found {found}")]
    WrongBlockCount { expected: usize, found: usize },
}

/// The first axiom an alleged equivalence relation breaks, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceFailure {
    #[error("not reflexive at {0}")]
    Reflexivity(String),
    #[error("not symmetric at ({0}, {1})")]
    Symmetry(String, String),
    #[error("not transitive at ({0}, {1}, {2})")]
    Transitivity(String, String, String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition<T> {
    ground: Vec<T>,
    blocks: Vec<Vec<T>>,
}

impl<T: Debug> Debug for Partition<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.blocks.iter()).finish()
    }
}

impl<T: Ord + Clone + Debug> Partition<T> {
    /// Checks that `blocks` are nonempty, pairwise disjoint and cover `ground`.
    pub fn new(ground: impl IntoIterator<Item = T>, blocks: Vec<Vec<T>>) -> Result<Self, PartitionError> {
        let ground: BTreeSet<T> = ground.into_iter().collect();
        let mut seen = BTreeSet::new();
        for (k, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(PartitionError::EmptyBlock(k));
            }
            for x in block {
                if !ground.contains(x) {
                    return Err(PartitionError::ForeignElement(format!("{x:?}")));
                }
                if !seen.insert(x.clone()) {
                    return Err(PartitionError::Overlap(format!("{x:?}")));
                }
            }
        }
        if let Some(missing) = ground.iter().find(|x| !seen.contains(*x)) {
            return Err(PartitionError::NotCovering(format!("{missing:?}")));
        }
        Ok(Self::normalized(ground.into_iter().collect(), blocks))
    }

    /// The partition whose ground set is the union of `blocks`.
    pub fn from_blocks(blocks: Vec<Vec<T>>) -> Result<Self, PartitionError> {
        let ground: Vec<T> = blocks.iter().flatten().cloned().collect();
        Self::new(ground, blocks)
    }

    /// Groups `ground` by a key; one block per distinct key.
    pub fn from_key<K: Ord, F: Fn(&T) -> K>(ground: impl IntoIterator<Item = T>, key: F) -> Self {
        let mut groups: BTreeMap<K, Vec<T>> = BTreeMap::new();
        let mut all = Vec::new();
        for x in ground {
            groups.entry(key(&x)).or_default().push(x.clone());
            all.push(x);
        }
        all.sort();
        all.dedup();
        Self::normalized(all, groups.into_values().collect())
    }

    fn normalized(ground: Vec<T>, mut blocks: Vec<Vec<T>>) -> Self {
        for b in &mut blocks {
            b.sort();
            b.dedup();
        }
        blocks.sort();
        Partition { ground, blocks }
    }

    pub fn ground(&self) -> &[T] {
        &self.ground
    }

    pub fn blocks(&self) -> &[Vec<T>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains_block(&self, block: &[T]) -> bool {
        self.blocks.binary_search_by(|b| b.as_slice().cmp(block)).is_ok()
    }

    /// Index of the block containing `x`.
    pub fn block_of(&self, x: &T) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(x).is_ok())
    }

    /// Sorted block sizes.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }

    pub fn to_relation(&self) -> EquivalenceRelation<T> {
        relation_from_partition(self)
    }

    /// Every block of `self` is contained in some block of `coarser`.
    pub fn refines(&self, coarser: &Partition<T>) -> bool {
        self.blocks.iter().all(|b| {
            coarser
                .block_of(&b[0])
                .is_some_and(|k| b.iter().all(|x| coarser.blocks[k].binary_search(x).is_ok()))
        })
    }

    /// Applies an injective map to every element.
    pub fn map<U: Ord + Clone + Debug, F: Fn(&T) -> U>(&self, f: F) -> Partition<U> {
        Partition::normalized(
            self.ground.iter().map(&f).collect::<BTreeSet<_>>().into_iter().collect(),
            self.blocks.iter().map(|b| b.iter().map(&f).collect()).collect(),
        )
    }
}

/// An equivalence relation, checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceRelation<T: Ord> {
    ground: Vec<T>,
    pairs: BTreeSet<(T, T)>,
}

impl<T: Ord + Clone + Debug> EquivalenceRelation<T> {
    /// Verifies reflexivity, symmetry and transitivity by enumeration.
    pub fn new(
        ground: impl IntoIterator<Item = T>,
        pairs: impl IntoIterator<Item = (T, T)>,
    ) -> Result<Self, PartitionError> {
        let ground: Vec<T> = ground.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let pairs: BTreeSet<(T, T)> = pairs.into_iter().collect();
        for (x, y) in &pairs {
            for e in [x, y] {
                if ground.binary_search(e).is_err() {
                    return Err(PartitionError::ForeignElement(format!("{e:?}")));
                }
            }
        }
        let fail = |f| Err(PartitionError::NotAnEquivalence(f));
        for x in &ground {
            if !pairs.contains(&(x.clone(), x.clone())) {
                return fail(EquivalenceFailure::Reflexivity(format!("{x:?}")));
            }
        }
        for (x, y) in &pairs {
            if !pairs.contains(&(y.clone(), x.clone())) {
                return fail(EquivalenceFailure::Symmetry(format!("{x:?}"), format!("{y:?}")));
            }
        }
        let mut successors: BTreeMap<&T, Vec<&T>> = BTreeMap::new();
        for (x, y) in &pairs {
            successors.entry(x).or_default().push(y);
        }
        for (x, y) in &pairs {
            for z in successors.get(y).into_iter().flatten() {
                if !pairs.contains(&(x.clone(), (*z).clone())) {
                    return fail(EquivalenceFailure::Transitivity(
                        format!("{x:?}"),
                        format!("{y:?}"),
                        format!("{z:?}"),
                    ));
                }
            }
        }
        Ok(EquivalenceRelation { ground, pairs })
    }

    pub fn ground(&self) -> &[T] {
        &self.ground
    }

    pub fn pairs(&self) -> &BTreeSet<(T, T)> {
        &self.pairs
    }

    pub fn related(&self, x: &T, y: &T) -> bool {
        self.pairs.contains(&(x.clone(), y.clone()))
    }

    pub fn to_partition(&self) -> Partition<T> {
        partition_from_relation(self)
    }
}

/// The quotient set of an equivalence relation.
pub fn partition_from_relation<T: Ord + Clone + Debug>(rel: &EquivalenceRelation<T>) -> Partition<T> {
    let mut blocks: Vec<Vec<T>> = Vec::new();
    let mut placed = BTreeSet::new();
    for x in &rel.ground {
        if placed.contains(x) {
            continue;
        }
        let class: Vec<T> = rel
            .pairs
            .range((x.clone(), rel.ground[0].clone())..)
            .take_while(|(a, _)| a == x)
            .map(|(_, b)| b.clone())
            .collect();
        placed.extend(class.iter().cloned());
        blocks.push(class);
    }
    Partition::normalized(rel.ground.clone(), blocks)
}

/// `R = ∪ⱼ Xⱼ²`.
pub fn relation_from_partition<T: Ord + Clone + Debug>(part: &Partition<T>) -> EquivalenceRelation<T> {
    let pairs = part
        .blocks
        .iter()
        .flat_map(|b| b.iter().flat_map(move |x| b.iter().map(move |y| (x.clone(), y.clone()))))
        .collect();
    EquivalenceRelation { ground: part.ground.clone(), pairs }
}

/// Set-of-sets equality.
///
/// Only the inclusion `P ⊆ Q` is checked: for two partitions of one ground
/// set, one inclusion already forces equality.
pub fn partitions_equal<T: Ord + Clone + Debug>(p: &Partition<T>, q: &Partition<T>) -> Result<bool, PartitionError> {
    if p.ground != q.ground {
        return Err(PartitionError::GroundMismatch);
    }
    Ok(p.blocks.iter().all(|b| q.contains_block(b)))
}

/// `x ≅₀ y ⇔ d(x, y) = 0`, over point indices.
pub fn zero_relation(space: &PseudometricSpace) -> EquivalenceRelation<usize> {
    let n = space.len();
    let pairs = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| space.is_zero(i, j));
    EquivalenceRelation::new(0..n, pairs).expect("the zero-relation of a pseudometric is an equivalence")
}

/// The zero-classes `X/≅₀`, normalized so block `j` is the `j`-th class by
/// smallest member.
pub fn zero_partition(space: &PseudometricSpace) -> Partition<usize> {
    let n = space.len();
    let mut rep = vec![usize::MAX; n];
    for i in 0..n {
        if rep[i] == usize::MAX {
            for (j, r) in rep.iter_mut().enumerate().skip(i) {
                if space.is_zero(i, j) {
                    *r = i;
                }
            }
        }
    }
    Partition::from_key(0..n, |&i| rep[i])
}

fn all_pairs(n: usize) -> impl Iterator<Item = Pair> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

/// `P_{d⁻¹} = {d⁻¹(t) : t ∈ d(X²)}`.
pub fn fiber_partition(space: &PseudometricSpace) -> Partition<Pair> {
    Partition::from_key(all_pairs(space.len()), |&(i, j)| space.code(i, j))
}

fn class_index(q: &Partition<usize>) -> Vec<usize> {
    let n = q.ground.len();
    assert!(
        q.ground.iter().copied().eq(0..n),
        "point partitions are over indices 0..n"
    );
    let mut idx = vec![0; n];
    for (k, b) in q.blocks.iter().enumerate() {
        for &x in b {
            idx[x] = k;
        }
    }
    idx
}

/// `Q ⊗₁ Q`: the diagonal block `∪ⱼ Xⱼ²` plus one block
/// `(X_a × X_b) ∪ (X_b × X_a)` per unordered pair of distinct classes.
pub fn otimes1(q: &Partition<usize>) -> Partition<Pair> {
    let idx = class_index(q);
    Partition::from_key(all_pairs(idx.len()), |&(x, y)| {
        let (a, b) = (idx[x], idx[y]);
        if a == b {
            None
        } else {
            Some((a.min(b), a.max(b)))
        }
    })
}

/// `Q ⊗₂ Q`: the diagonal block and its complement.
pub fn otimes2(q: &Partition<usize>) -> Partition<Pair> {
    let idx = class_index(q);
    Partition::from_key(all_pairs(idx.len()), |&(x, y)| idx[x] != idx[y])
}

/// `Q ⊗₃ Q` for exactly four classes, in `Q`'s normalized block order.
pub fn otimes3(q: &Partition<usize>) -> Result<Partition<Pair>, PartitionError> {
    otimes3_ordered(q, [0, 1, 2, 3])
}

/// `Q ⊗₃ Q` with `X₁..X₄ = blocks[order[0]]..blocks[order[3]]`.
///
/// The three off-diagonal blocks are the perfect matchings
/// `{X₁X₂, X₃X₄}`, `{X₁X₃, X₂X₄}` and `{X₁X₄, X₂X₃}`.
pub fn otimes3_ordered(q: &Partition<usize>, order: [usize; 4]) -> Result<Partition<Pair>, PartitionError> {
    if q.len() != 4 {
        return Err(PartitionError::WrongBlockCount { expected: 4, found: q.len() });
    }
    let mut seen = [false; 4];
    for &k in &order {
        assert!(k < 4 && !seen[k], "order must be a permutation of 0..4");
        seen[k] = true;
    }
    let idx = class_index(q);
    // position of each normalized block in X₁..X₄ (0-based)
    let mut slot = [0usize; 4];
    for (pos, &k) in order.iter().enumerate() {
        slot[k] = pos;
    }
    Ok(Partition::from_key(all_pairs(idx.len()), |&(x, y)| {
        let (a, b) = (slot[idx[x]], slot[idx[y]]);
        if a == b {
            0u8
        } else {
            // the matching containing {X₁, X_c} where c is X₁'s partner
            let partner_of_first = if a == 0 { b } else if b == 0 { a } else { 6 - a - b };
            partner_of_first as u8
        }
    }))
}
