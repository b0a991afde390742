//! Permutations of a finite space and the groups they form.
//!
//! `Cs(X, d)` is the group of combinatorial self-similarities and
//! `PI(X, d)` the subgroup of pseudoidentities. Both are enumerated
//! explicitly by walking `Sym(X)`, so every function here that calls
//! [`symmetric_group`] is bounded by a brute-force cap and fails loudly
//! with [`GroupError::TooLarge`] past it.
//!
//! Every walk over `Sym(X)` bumps a per-thread counter readable through
//! [`enumeration_count`]; the structural classifiers are tested to leave it
//! untouched.

use std::cell::Cell;
use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::classify::{metric_reflection, MetricReflection};
use crate::space::PseudometricSpace;

/// Default cap on `|X|` for explicit enumeration of `Sym(X)`.
pub const DEFAULT_BRUTE_FORCE_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("SizeMismatch: expected degree {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("TooLarge: {n} points exceeds brute-force bound {bound}")]
    TooLarge { n: usize, bound: usize },
    #[error("NotABijection: {0:?}")]
    NotABijection(Vec<usize>),
    #[error("NotAGroup: {0}")]
    NotAGroup(String),
    #[error("NotReflectionSimilarity: the class permutation is not in Cs of the reflection")]
    NotReflectionSimilarity,
}

thread_local! {
    static ENUMERATIONS: Cell<u64> = const { Cell::new(0) };
}

/// Number of `Sym(n)` walks started on the current thread.
pub fn enumeration_count() -> u64 {
    ENUMERATIONS.with(Cell::get)
}

/// A bijection of `{0, …, n−1}`; entry `i` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self, GroupError> {
        let n = mapping.len();
        let mut hit = vec![false; n];
        for &m in &mapping {
            if m >= n || hit[m] {
                return Err(GroupError::NotABijection(mapping));
            }
            hit[m] = true;
        }
        Ok(Permutation(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut m: Vec<usize> = (0..n).collect();
        m.swap(a, b);
        Permutation(m)
    }

    /// Builds a permutation from disjoint cycles, e.g. `[[0, 2, 1]]` sends 0→2→1→0.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, GroupError> {
        let mut m: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(GroupError::NotABijection(m));
                }
                m[x] = c[(k + 1) % c.len()];
            }
        }
        Permutation::new(m)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "composing permutations of different degree");
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &m) in self.0.iter().enumerate() {
            inv[m] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle notation over labels, `id` for the identity.
    pub fn display_with<S: AsRef<str>>(&self, labels: &[S]) -> String {
        if self.is_identity() {
            return "id".to_string();
        }
        self.cycles()
            .iter()
            .map(|c| {
                let inner: Vec<&str> = c.iter().map(|&i| labels[i].as_ref()).collect();
                format!("({})", inner.join(" "))
            })
            .collect()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Lexicographic walk over `Sym(n)`.
pub struct SymmetricGroup {
    next: Option<Vec<usize>>,
}

/// All `n!` permutations in lexicographic order of their mappings.
pub fn symmetric_group(n: usize) -> SymmetricGroup {
    ENUMERATIONS.with(|c| c.set(c.get() + 1));
    SymmetricGroup { next: Some((0..n).collect()) }
}

impl Iterator for SymmetricGroup {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // standard next-permutation step
        if let Some(i) = (1..succ.len()).rev().find(|&i| succ[i - 1] < succ[i]) {
            let pivot = i - 1;
            let j = (i..succ.len()).rev().find(|&j| succ[j] > succ[pivot]).unwrap();
            succ.swap(pivot, j);
            succ[i..].reverse();
            self.next = Some(succ);
        }
        Some(Permutation(current))
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// An explicitly enumerated permutation group, elements sorted by mapping.
#[derive(Clone, PartialEq, Eq)]
pub struct PermutationGroup {
    degree: usize,
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
}

impl fmt::Debug for PermutationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermutationGroup")
            .field("degree", &self.degree)
            .field("order", &self.elements.len())
            .finish()
    }
}

impl PermutationGroup {
    /// Checks the group axioms: identity, inverses and closure.
    ///
    /// Closure is verified by growing the subgroup generated by elements of
    /// the set one generator at a time; every product met on the way must
    /// already be in the set, and the set must be exhausted at the end.
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> Result<Self, GroupError> {
        elements.sort();
        elements.dedup();
        if let Some(bad) = elements.iter().find(|p| p.degree() != degree) {
            return Err(GroupError::SizeMismatch { expected: degree, found: bad.degree() });
        }
        let members: HashSet<&Permutation> = elements.iter().collect();
        let id = Permutation::identity(degree);
        if !members.contains(&id) {
            return Err(GroupError::NotAGroup("missing identity".into()));
        }
        if let Some(p) = elements.iter().find(|p| !members.contains(&p.inverse())) {
            return Err(GroupError::NotAGroup(format!("inverse of {p:?} missing")));
        }
        let mut generators: Vec<Permutation> = Vec::new();
        let mut generated: HashSet<Permutation> = HashSet::from([id]);
        for g in &elements {
            if generated.contains(g) {
                continue;
            }
            generators.push(g.clone());
            let mut queue: Vec<Permutation> = generated.iter().cloned().collect();
            while let Some(x) = queue.pop() {
                for s in &generators {
                    let y = x.compose(s);
                    if !generated.contains(&y) {
                        if !members.contains(&y) {
                            return Err(GroupError::NotAGroup(format!(
                                "{x:?} ∘ {s:?} = {y:?} is not a member"
                            )));
                        }
                        generated.insert(y.clone());
                        queue.push(y);
                    }
                }
            }
        }
        debug_assert_eq!(generated.len(), elements.len());
        Ok(PermutationGroup { degree, elements, generators })
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            elements: vec![Permutation::identity(degree)],
            generators: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// A generating set found while checking closure.
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|p| other.contains(p))
    }

    /// Whether the group is all of `Sym(degree)`.
    pub fn is_full_symmetric(&self) -> bool {
        self.elements.len() as u128 == factorial(self.degree)
    }
}

/// Whether `perm` is a combinatorial self-similarity of `space`.
///
/// Builds the induced value map `d(x, y) ↦ d(Φx, Φy)` in one pass over
/// `X²`, failing as soon as it stops being a well-defined injection.
pub fn is_self_similarity(space: &PseudometricSpace, perm: &Permutation) -> Result<bool, GroupError> {
    let n = space.len();
    if perm.degree() != n {
        return Err(GroupError::SizeMismatch { expected: n, found: perm.degree() });
    }
    const UNSET: u32 = u32::MAX;
    let k = space.range().len();
    let mut forward = vec![UNSET; k];
    let mut backward = vec![UNSET; k];
    for x in 0..n {
        let px = perm.apply(x);
        for y in 0..n {
            let from = space.code(x, y);
            let to = space.code(px, perm.apply(y));
            match forward[from as usize] {
                UNSET => {
                    if backward[to as usize] != UNSET {
                        return Ok(false);
                    }
                    forward[from as usize] = to;
                    backward[to as usize] = from;
                }
                seen if seen != to => return Ok(false),
                _ => {}
            }
        }
    }
    assert_eq!(forward[0], 0, "a self-similarity must fix the value 0");
    Ok(true)
}

/// The four-point test: `d(x,y) = d(u,v) ⇔ d(Φx,Φy) = d(Φu,Φv)` for all
/// `x, y, u, v`. `O(n⁴)`; kept as an independent check on
/// [`is_self_similarity`].
pub fn is_self_similarity_quadruple(space: &PseudometricSpace, perm: &Permutation) -> Result<bool, GroupError> {
    let n = space.len();
    if perm.degree() != n {
        return Err(GroupError::SizeMismatch { expected: n, found: perm.degree() });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    for &(x, y) in &pairs {
        for &(u, v) in &pairs {
            let before = space.distance(x, y) == space.distance(u, v);
            let after = space.distance(perm.apply(x), perm.apply(y))
                == space.distance(perm.apply(u), perm.apply(v));
            if before != after {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `perm` is a pseudoidentity: `d(x, Φx) = 0` for every `x`.
pub fn is_pseudoidentity(space: &PseudometricSpace, perm: &Permutation) -> bool {
    (0..space.len()).all(|x| space.is_zero(x, perm.apply(x)))
}

fn check_bound(n: usize, bound: usize) -> Result<(), GroupError> {
    if n > bound {
        Err(GroupError::TooLarge { n, bound })
    } else {
        Ok(())
    }
}

/// `Cs(X, d)` by enumeration of `Sym(X)`.
pub fn cs_group(space: &PseudometricSpace, bound: usize) -> Result<PermutationGroup, GroupError> {
    check_bound(space.len(), bound)?;
    let elements = symmetric_group(space.len())
        .filter(|p| is_self_similarity(space, p).expect("degree matches"))
        .collect();
    PermutationGroup::from_elements(space.len(), elements)
}

/// `PI(X, d)` by enumeration of `Sym(X)`.
pub fn pi_group(space: &PseudometricSpace, bound: usize) -> Result<PermutationGroup, GroupError> {
    check_bound(space.len(), bound)?;
    let elements = symmetric_group(space.len())
        .filter(|p| is_pseudoidentity(space, p))
        .collect();
    PermutationGroup::from_elements(space.len(), elements)
}

/// The homomorphism `H: Cs(X, d) → Cs(X/≅₀, δ_d)` induced by the canonical
/// projection, tabulated element by element.
#[derive(Debug, Clone)]
pub struct ReflectionHom {
    source: PermutationGroup,
    target: PermutationGroup,
    images: Vec<Permutation>,
    reflection: MetricReflection,
}

impl ReflectionHom {
    pub fn source(&self) -> &PermutationGroup {
        &self.source
    }

    pub fn target(&self) -> &PermutationGroup {
        &self.target
    }

    pub fn reflection(&self) -> &MetricReflection {
        &self.reflection
    }

    /// `(Φ, H(Φ))` in the source group's order.
    pub fn table(&self) -> impl Iterator<Item = (&Permutation, &Permutation)> {
        self.source.elements().iter().zip(&self.images)
    }

    pub fn image_of(&self, phi: &Permutation) -> Option<&Permutation> {
        self.source.elements().binary_search(phi).ok().map(|k| &self.images[k])
    }

    /// The image `H(Cs(X, d))` as a subgroup of the target.
    pub fn image(&self) -> PermutationGroup {
        PermutationGroup::from_elements(self.target.degree(), self.images.clone())
            .expect("the image of a homomorphism is a group")
    }
}

/// Tabulates `H(Φ)(π(x)) = π(Φ(x))` over `Cs(X, d)`.
///
/// Asserts that each `H(Φ)` is well defined (zero-classes go to
/// zero-classes), lies in `Cs` of the reflection, and that `H` respects
/// composition. The law is checked on all products `g ∘ s` with `s` from a
/// generating set, which covers every product by induction.
pub fn reflection_hom(space: &PseudometricSpace, bound: usize) -> Result<ReflectionHom, GroupError> {
    let source = cs_group(space, bound)?;
    let reflection = metric_reflection(space);
    let target = cs_group(&reflection.space, bound)?;
    let proj = &reflection.projection;
    let reps: Vec<usize> = reflection.classes.blocks().iter().map(|b| b[0]).collect();

    let images: Vec<Permutation> = source
        .elements()
        .iter()
        .map(|phi| {
            let h = Permutation(reps.iter().map(|&r| proj[phi.apply(r)]).collect());
            for x in 0..space.len() {
                assert_eq!(
                    proj[phi.apply(x)],
                    h.apply(proj[x]),
                    "self-similarities must map zero-classes onto zero-classes"
                );
            }
            assert!(target.contains(&h), "H(Φ) must be a self-similarity of the reflection");
            h
        })
        .collect();

    let index: HashMap<&Permutation, usize> =
        source.elements().iter().enumerate().map(|(k, p)| (p, k)).collect();
    for (k, g) in source.elements().iter().enumerate() {
        for s in source.generators() {
            let gs = index[&g.compose(s)];
            let hs = &images[index[s]];
            assert_eq!(images[gs], images[k].compose(hs), "H(g∘s) = H(g)∘H(s)");
        }
    }

    Ok(ReflectionHom { source, target, images, reflection })
}

/// `ker H = {Φ ∈ Cs : H(Φ) = id}`.
pub fn kernel(hom: &ReflectionHom) -> PermutationGroup {
    let elements = hom
        .table()
        .filter(|(_, h)| h.is_identity())
        .map(|(p, _)| p.clone())
        .collect();
    PermutationGroup::from_elements(hom.source.degree(), elements).expect("a kernel is a subgroup")
}

/// Whether `π ∘ Φ = Ψ ∘ π` for a self-similarity `Ψ` of the reflection.
///
/// When the square commutes, `Φ` is asserted to be a self-similarity of the
/// space itself.
pub fn lift_self_similarity(
    space: &PseudometricSpace,
    psi: &Permutation,
    phi: &Permutation,
) -> Result<bool, GroupError> {
    let reflection = metric_reflection(space);
    let m = reflection.space.len();
    if phi.degree() != space.len() {
        return Err(GroupError::SizeMismatch { expected: space.len(), found: phi.degree() });
    }
    if psi.degree() != m {
        return Err(GroupError::SizeMismatch { expected: m, found: psi.degree() });
    }
    if !is_self_similarity(&reflection.space, psi)? {
        return Err(GroupError::NotReflectionSimilarity);
    }
    let proj = &reflection.projection;
    let commutes = (0..space.len()).all(|x| proj[phi.apply(x)] == psi.apply(proj[x]));
    if commutes {
        assert!(
            is_self_similarity(space, phi)?,
            "a bijection lifting a self-similarity of the reflection is a self-similarity"
        );
    }
    Ok(commutes)
}
