//! Combinatorial similarity between two spaces.
//!
//! A witness for `(X, d)` and `(Y, ρ)` is a bijection `ψ: Y → X` together
//! with a bijection `f` of distance values such that
//! `ρ(y₁, y₂) = f(d(ψy₁, ψy₂))`. Finding one is isomorphism of two
//! edge-colored complete graphs up to a recoloring that keeps 0 fixed; it
//! is solved here by backtracking, after cheap invariant checks.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::classify::{
    is_discrete_structural, is_pseudorectangle_structural, is_strongly_rigid_structural, metric_reflection,
};
use crate::partition::{fiber_partition, partitions_equal, zero_partition, Partition};
use crate::rational::Rational;
use crate::space::PseudometricSpace;

/// Default cap on the number of points for the backtracking search.
pub const DEFAULT_SEARCH_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimilarityError {
    #[error("TooLarge: {n} points exceeds search bound {bound}")]
    TooLarge { n: usize, bound: usize },
    #[error("PointSetMismatch: the two spaces are not on the same point set")]
    PointSetMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimilarityWitness {
    /// `psi[y]` is the point of `X` matched with point `y` of `Y`.
    pub psi: Vec<usize>,
    /// `(t, f(t))` for every `t` in `d(X²)`, sorted by `t`.
    pub f: Vec<(Rational, Rational)>,
}

impl SimilarityWitness {
    pub fn value_map(&self, t: &Rational) -> Option<&Rational> {
        self.f
            .binary_search_by(|(s, _)| s.cmp(t))
            .ok()
            .map(|k| &self.f[k].1)
    }

    /// Exhaustive check of the witness against both spaces.
    pub fn verify(&self, x: &PseudometricSpace, y: &PseudometricSpace) -> bool {
        let n = y.len();
        if self.psi.len() != n || x.len() != n {
            return false;
        }
        let images: BTreeSet<usize> = self.psi.iter().copied().collect();
        if images.len() != n || images.iter().any(|&i| i >= n) {
            return false;
        }
        let domain: Vec<&Rational> = self.f.iter().map(|(s, _)| s).collect();
        let codomain: BTreeSet<&Rational> = self.f.iter().map(|(_, t)| t).collect();
        if domain.len() != x.range().len()
            || domain.iter().zip(x.range().values()).any(|(a, b)| *a != b)
            || codomain.len() != y.range().len()
            || codomain.iter().zip(y.range().values()).any(|(a, b)| *a != b)
        {
            return false;
        }
        if self.value_map(&Rational::zero()).is_some_and(|v| !v.is_zero()) {
            return false;
        }
        (0..n).all(|a| {
            (0..n).all(|b| {
                self.value_map(x.distance(self.psi[a], self.psi[b])) == Some(y.distance(a, b))
            })
        })
    }

    /// The witness for `(Y, X)`.
    pub fn inverse(&self) -> SimilarityWitness {
        let mut psi = vec![0; self.psi.len()];
        for (y, &x) in self.psi.iter().enumerate() {
            psi[x] = y;
        }
        let mut f: Vec<(Rational, Rational)> = self.f.iter().map(|(s, t)| (t.clone(), s.clone())).collect();
        f.sort();
        SimilarityWitness { psi, f }
    }

    /// Given `self` for `(X, Y)` and `next` for `(Y, Z)`, the witness for `(X, Z)`.
    pub fn then(&self, next: &SimilarityWitness) -> SimilarityWitness {
        let psi = next.psi.iter().map(|&y| self.psi[y]).collect();
        let f = self
            .f
            .iter()
            .map(|(s, t)| (s.clone(), next.value_map(t).expect("ranges line up").clone()))
            .collect();
        SimilarityWitness { psi, f }
    }
}

/// Why two spaces were found not to be similar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Rejection {
    SizeMismatch { x: usize, y: usize },
    RangeSizeMismatch { x: usize, y: usize },
    ZeroBlockSizes,
    FiberSizes,
    Exhausted,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::SizeMismatch { x, y } => write!(f, "point counts differ ({x} vs {y})"),
            Rejection::RangeSizeMismatch { x, y } => write!(f, "distance ranges differ in size ({x} vs {y})"),
            Rejection::ZeroBlockSizes => write!(f, "zero-class sizes differ"),
            Rejection::FiberSizes => write!(f, "fiber sizes differ"),
            Rejection::Exhausted => write!(f, "no bijection survives exhaustive search"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Similar(SimilarityWitness),
    NotSimilar(Rejection),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ValueMode {
    /// `f` is any bijection fixing 0.
    Free,
    /// `f` is the identity: distances must match exactly.
    Identity,
}

fn quick_rejection(x: &PseudometricSpace, y: &PseudometricSpace) -> Option<Rejection> {
    if x.len() != y.len() {
        return Some(Rejection::SizeMismatch { x: x.len(), y: y.len() });
    }
    if x.range().len() != y.range().len() {
        return Some(Rejection::RangeSizeMismatch { x: x.range().len(), y: y.range().len() });
    }
    if zero_partition(x).block_sizes() != zero_partition(y).block_sizes() {
        return Some(Rejection::ZeroBlockSizes);
    }
    let sizes = |s: &PseudometricSpace| {
        let all = s.fiber_sizes();
        let mut nonzero = all[1..].to_vec();
        nonzero.sort_unstable();
        (all[0], nonzero)
    };
    if sizes(x) != sizes(y) {
        return Some(Rejection::FiberSizes);
    }
    None
}

/// Per-point invariant: zero-class size, then the sorted multiset of
/// nonzero fiber degrees.
fn profile(space: &PseudometricSpace, p: usize) -> (usize, Vec<usize>) {
    let mut degree = vec![0usize; space.range().len()];
    for q in 0..space.len() {
        degree[space.code(p, q) as usize] += 1;
    }
    let zero_class = degree[0];
    let mut rest = degree[1..].to_vec();
    rest.retain(|&c| c > 0);
    rest.sort_unstable();
    (zero_class, rest)
}

const UNSET: u32 = u32::MAX;

struct Search<'a> {
    x: &'a PseudometricSpace,
    y: &'a PseudometricSpace,
    mode: ValueMode,
    /// Points of `Y` in assignment order, with their admissible images.
    order: Vec<(usize, Vec<usize>)>,
    psi: Vec<usize>,
    used: Vec<bool>,
    /// `forward[code in X] = code in Y` and its inverse.
    forward: Vec<u32>,
    backward: Vec<u32>,
    trail: Vec<u32>,
    /// Stop after the first witness when true.
    first_only: bool,
    found: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(x: &'a PseudometricSpace, y: &'a PseudometricSpace, mode: ValueMode, first_only: bool) -> Self {
        let n = y.len();
        let x_profiles: Vec<_> = (0..n).map(|p| profile(x, p)).collect();
        let mut order: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|q| {
                let prof = profile(y, q);
                let cands = (0..n).filter(|&p| x_profiles[p] == prof).collect();
                (q, cands)
            })
            .collect();
        let y_profiles: Vec<_> = (0..n).map(|q| profile(y, q)).collect();
        order.sort_by(|(a, ca), (b, cb)| {
            (ca.len(), &y_profiles[*a], *a).cmp(&(cb.len(), &y_profiles[*b], *b))
        });
        let k = x.range().len();
        let mut forward = vec![UNSET; k];
        let mut backward = vec![UNSET; y.range().len().max(1)];
        forward[0] = 0;
        backward[0] = 0;
        Search {
            x,
            y,
            mode,
            order,
            psi: vec![usize::MAX; n],
            used: vec![false; n],
            forward,
            backward,
            trail: Vec::new(),
            first_only,
            found: Vec::new(),
        }
    }

    /// Extends the value map with the pairs between `q ↦ p` and every
    /// point already placed. Returns false on conflict; the caller undoes
    /// trail entries past its mark either way.
    fn try_place(&mut self, depth: usize, q: usize, p: usize) -> bool {
        for &(prev, _) in &self.order[..depth] {
            let xp = self.psi[prev];
            match self.mode {
                ValueMode::Identity => {
                    if self.x.distance(p, xp) != self.y.distance(q, prev) {
                        return false;
                    }
                }
                ValueMode::Free => {
                    let cx = self.x.code(p, xp);
                    let cy = self.y.code(q, prev);
                    let seen = self.forward[cx as usize];
                    if seen == UNSET {
                        if self.backward[cy as usize] != UNSET {
                            return false;
                        }
                        self.forward[cx as usize] = cy;
                        self.backward[cy as usize] = cx;
                        self.trail.push(cx);
                    } else if seen != cy {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let cx = self.trail.pop().unwrap();
            let cy = self.forward[cx as usize];
            self.forward[cx as usize] = UNSET;
            self.backward[cy as usize] = UNSET;
        }
    }

    /// Returns true to stop the search.
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            self.found.push(self.psi.clone());
            return self.first_only;
        }
        let (q, cands) = (self.order[depth].0, self.order[depth].1.clone());
        for p in cands {
            if self.used[p] {
                continue;
            }
            let mark = self.trail.len();
            if self.try_place(depth, q, p) {
                self.psi[q] = p;
                self.used[p] = true;
                if self.run(depth + 1) {
                    return true;
                }
                self.used[p] = false;
                self.psi[q] = usize::MAX;
            }
            self.undo_to(mark);
        }
        false
    }
}

fn witness_from_psi(x: &PseudometricSpace, y: &PseudometricSpace, psi: Vec<usize>) -> SimilarityWitness {
    let mut f: Vec<Option<Rational>> = vec![None; x.range().len()];
    for a in 0..y.len() {
        for b in 0..y.len() {
            let c = x.code(psi[a], psi[b]) as usize;
            f[c].get_or_insert_with(|| y.distance(a, b).clone());
        }
    }
    let f = x
        .range()
        .values()
        .iter()
        .zip(f)
        .map(|(t, v)| (t.clone(), v.expect("every value is realized")))
        .collect();
    SimilarityWitness { psi, f }
}

fn search(
    x: &PseudometricSpace,
    y: &PseudometricSpace,
    mode: ValueMode,
    bound: usize,
) -> Result<SearchOutcome, SimilarityError> {
    if let Some(r) = quick_rejection(x, y) {
        return Ok(SearchOutcome::NotSimilar(r));
    }
    if y.len() > bound {
        return Err(SimilarityError::TooLarge { n: y.len(), bound });
    }
    let mut s = Search::new(x, y, mode, true);
    s.run(0);
    Ok(match s.found.pop() {
        Some(psi) => {
            let w = witness_from_psi(x, y, psi);
            assert!(w.verify(x, y), "search produced an invalid witness");
            SearchOutcome::Similar(w)
        }
        None => SearchOutcome::NotSimilar(Rejection::Exhausted),
    })
}

/// Searches for a witness, reporting the first reason for failure.
pub fn search_similarity(
    x: &PseudometricSpace,
    y: &PseudometricSpace,
    bound: usize,
) -> Result<SearchOutcome, SimilarityError> {
    search(x, y, ValueMode::Free, bound)
}

pub fn find_similarity(
    x: &PseudometricSpace,
    y: &PseudometricSpace,
    bound: usize,
) -> Result<Option<SimilarityWitness>, SimilarityError> {
    Ok(match search_similarity(x, y, bound)? {
        SearchOutcome::Similar(w) => Some(w),
        SearchOutcome::NotSimilar(_) => None,
    })
}

/// Every witness for `(X, Y)`. Counts grow factorially; meant for tests.
pub fn enumerate_witnesses(
    x: &PseudometricSpace,
    y: &PseudometricSpace,
    bound: usize,
) -> Result<Vec<SimilarityWitness>, SimilarityError> {
    if quick_rejection(x, y).is_some() {
        return Ok(Vec::new());
    }
    if y.len() > bound {
        return Err(SimilarityError::TooLarge { n: y.len(), bound });
    }
    let mut s = Search::new(x, y, ValueMode::Free, false);
    s.run(0);
    let mut out: Vec<SimilarityWitness> = s.found.into_iter().map(|psi| witness_from_psi(x, y, psi)).collect();
    out.sort_by(|a, b| a.psi.cmp(&b.psi));
    Ok(out)
}

/// Whether the metric reflections are isometric.
pub fn are_pseudoisometric(
    x: &PseudometricSpace,
    y: &PseudometricSpace,
    bound: usize,
) -> Result<bool, SimilarityError> {
    let rx = metric_reflection(x).space;
    let ry = metric_reflection(y).space;
    if rx.range().values() != ry.range().values() {
        return Ok(false);
    }
    Ok(matches!(search(&rx, &ry, ValueMode::Identity, bound)?, SearchOutcome::Similar(_)))
}

/// `psi[y] = x` for points with the same label, when the label sets agree.
fn identity_on_labels(x: &PseudometricSpace, y: &PseudometricSpace) -> Result<Vec<usize>, SimilarityError> {
    if x.len() != y.len() {
        return Err(SimilarityError::PointSetMismatch);
    }
    y.labels()
        .iter()
        .map(|l| x.index_of(l).ok_or(SimilarityError::PointSetMismatch))
        .collect()
}

/// `Id_X` as a witness, when the fiber partitions of the two spaces coincide.
pub fn identity_similarity_from_fibers(
    x: &PseudometricSpace,
    y: &PseudometricSpace,
) -> Result<Option<SimilarityWitness>, SimilarityError> {
    let psi = identity_on_labels(x, y)?;
    let y_fibers: Partition<(usize, usize)> = fiber_partition(y).map(|&(a, b)| (psi[a], psi[b]));
    if !partitions_equal(&fiber_partition(x), &y_fibers).expect("same ground") {
        return Ok(None);
    }
    let mut inverse = vec![0; psi.len()];
    for (b, &a) in psi.iter().enumerate() {
        inverse[a] = b;
    }
    let mut f: Vec<(Rational, Rational)> = fiber_partition(x)
        .blocks()
        .iter()
        .map(|block| {
            let (a, b) = block[0];
            (x.distance(a, b).clone(), y.distance(inverse[a], inverse[b]).clone())
        })
        .collect();
    f.sort();
    let w = SimilarityWitness { psi, f };
    assert!(w.verify(x, y), "equal fiber partitions must give a witness");
    Ok(Some(w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ZeroCriterion {
    pub verdict: bool,
    /// Both spaces discrete, both strongly rigid, or both pseudorectangles.
    pub theorem_applicable: bool,
}

/// Same-ground similarity through zero-relations.
///
/// "Similar" here means similar through `Id_X`, the reading under which the
/// criterion holds on a shared ground set. When a class hypothesis applies,
/// the verdict is equality of the zero-relations; otherwise it is the
/// existence of the identity witness itself.
pub fn similar_iff_same_zero(x: &PseudometricSpace, y: &PseudometricSpace) -> Result<ZeroCriterion, SimilarityError> {
    let psi = identity_on_labels(x, y)?;
    let n = x.len();
    let both = |p: fn(&PseudometricSpace) -> bool| p(x) && p(y);
    let theorem_applicable =
        both(is_discrete_structural) || both(is_strongly_rigid_structural) || both(is_pseudorectangle_structural);
    let verdict = if theorem_applicable {
        (0..n).all(|a| (0..n).all(|b| y.is_zero(a, b) == x.is_zero(psi[a], psi[b])))
    } else {
        identity_similarity_from_fibers(x, y)?.is_some()
    };
    Ok(ZeroCriterion { verdict, theorem_applicable })
}

/// `{ψ(B) : B a zero-class of Y}` is the zero-partition of `X`.
pub fn transports_zero_classes(w: &SimilarityWitness, x: &PseudometricSpace, y: &PseudometricSpace) -> bool {
    zero_partition(y).map(|&q| w.psi[q]) == zero_partition(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(labels: &str, rows: &[&[i64]]) -> PseudometricSpace {
        PseudometricSpace::validate(
            labels.chars().map(String::from).collect(),
            rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect(),
        )
        .unwrap()
    }

    fn triangle(a: i64, b: i64, c: i64) -> PseudometricSpace {
        space("xyz", &[&[0, a, b], &[a, 0, c], &[b, c, 0]])
    }

    fn rectangle() -> PseudometricSpace {
        space("abcd", &[&[0, 3, 5, 4], &[3, 0, 4, 5], &[5, 4, 0, 3], &[4, 5, 3, 0]])
    }

    #[test]
    fn self_similarity_is_identity() {
        for s in [rectangle(), triangle(3, 4, 5), triangle(1, 1, 1)] {
            let w = find_similarity(&s, &s, 12).unwrap().unwrap();
            assert!(w.verify(&s, &s));
            let all = enumerate_witnesses(&s, &s, 12).unwrap();
            let id: Vec<usize> = (0..s.len()).collect();
            let identity = all.iter().find(|w| w.psi == id).unwrap();
            assert!(identity.f.iter().all(|(a, b)| a == b));
        }
    }

    #[test]
    fn rigid_triangles_are_similar() {
        let x = triangle(1, 2, 3);
        let y = triangle(20, 25, 10);
        let w = find_similarity(&x, &y, 12).unwrap().unwrap();
        assert!(w.verify(&x, &y));
        assert_eq!(w.value_map(&Rational::zero()), Some(&Rational::zero()));
        assert!(transports_zero_classes(&w, &x, &y));
        assert_eq!(enumerate_witnesses(&x, &y, 12).unwrap().len(), 6);
    }

    #[test]
    fn equidistant_vs_rigid_rejected_quickly() {
        let out = search_similarity(&triangle(1, 1, 1), &triangle(1, 2, 3), 12).unwrap();
        assert_eq!(out, SearchOutcome::NotSimilar(Rejection::RangeSizeMismatch { x: 2, y: 4 }));
        assert!(enumerate_witnesses(&triangle(1, 1, 1), &triangle(1, 2, 3), 12).unwrap().is_empty());
    }

    fn graph_metric(n: usize, edges: &[(usize, usize)]) -> PseudometricSpace {
        let mut dist = vec![Rational::from(2); n * n];
        for i in 0..n {
            dist[i * n + i] = Rational::zero();
        }
        for &(a, b) in edges {
            dist[a * n + b] = Rational::from(1);
            dist[b * n + a] = Rational::from(1);
        }
        PseudometricSpace::from_row_major((0..n).map(|i| i.to_string()).collect(), dist).unwrap()
    }

    #[test]
    fn exhausted_when_invariants_agree() {
        // a hexagon and two disjoint triangles: every point has the same profile
        let hexagon = graph_metric(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let triangles = graph_metric(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_eq!(
            search_similarity(&hexagon, &triangles, 12).unwrap(),
            SearchOutcome::NotSimilar(Rejection::Exhausted)
        );
        let shifted = graph_metric(6, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)]);
        assert!(find_similarity(&hexagon, &shifted, 12).unwrap().is_some());
    }

    #[test]
    fn too_large_only_after_quick_checks() {
        let x = triangle(1, 2, 3);
        assert_eq!(search_similarity(&x, &x, 2).unwrap_err(), SimilarityError::TooLarge { n: 3, bound: 2 });
        let point = space("a", &[&[0]]);
        assert_eq!(
            search_similarity(&x, &point, 2).unwrap(),
            SearchOutcome::NotSimilar(Rejection::SizeMismatch { x: 3, y: 1 })
        );
    }

    #[test]
    fn inverse_and_composition() {
        let x = triangle(1, 2, 3);
        let y = triangle(20, 25, 10);
        let z = triangle(7, 5, 6);
        let xy = find_similarity(&x, &y, 12).unwrap().unwrap();
        let yz = find_similarity(&y, &z, 12).unwrap().unwrap();
        assert!(xy.inverse().verify(&y, &x));
        assert!(xy.then(&yz).verify(&x, &z));
    }

    #[test]
    fn pseudoisometry_examples() {
        let s = space("abc", &[&[0, 1, 1], &[1, 0, 0], &[1, 0, 0]]);
        let refl = metric_reflection(&s).space;
        assert!(are_pseudoisometric(&s, &refl, 12).unwrap());
        let zero = space("abc", &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        assert!(are_pseudoisometric(&zero, &space("p", &[&[0]]), 12).unwrap());
        let one = space("ab", &[&[0, 1], &[1, 0]]);
        let two = space("ab", &[&[0, 2], &[2, 0]]);
        assert!(!are_pseudoisometric(&one, &two, 12).unwrap());
        assert!(find_similarity(&one, &two, 12).unwrap().is_some());
    }

    #[test]
    fn identity_witness_from_fibers() {
        let x = rectangle();
        let y = x.map_values(|t| if t.is_zero() { t.clone() } else { t + &Rational::from(1) }).unwrap();
        let w = identity_similarity_from_fibers(&x, &y).unwrap().unwrap();
        assert_eq!(w.psi, vec![0, 1, 2, 3]);
        assert_eq!(w.value_map(&Rational::from(3)), Some(&Rational::from(4)));
        let same = identity_similarity_from_fibers(&x, &x).unwrap().unwrap();
        assert!(same.f.iter().all(|(a, b)| a == b));
        // rectangles on the same four points share their fiber partition
        let other = space("abcd", &[&[0, 3, 4, 5], &[3, 0, 5, 4], &[4, 5, 0, 3], &[5, 4, 3, 0]]);
        assert!(identity_similarity_from_fibers(&x, &other).unwrap().is_some());
        let short_ab = space("abcd", &[&[0, 2, 3, 3], &[2, 0, 3, 3], &[3, 3, 0, 2], &[3, 3, 2, 0]]);
        let short_ac = space("abcd", &[&[0, 3, 2, 3], &[3, 0, 3, 2], &[2, 3, 0, 3], &[3, 2, 3, 0]]);
        assert!(identity_similarity_from_fibers(&short_ab, &short_ac).unwrap().is_none());
        assert!(find_similarity(&short_ab, &short_ac, 12).unwrap().is_some());
        assert_eq!(
            identity_similarity_from_fibers(&x, &triangle(1, 2, 3)).unwrap_err(),
            SimilarityError::PointSetMismatch
        );
    }

    #[test]
    fn identity_witness_respects_labels() {
        let x = triangle(3, 4, 5);
        // same space listed in a different point order
        let y = x.relabeled(&[2, 0, 1]);
        let w = identity_similarity_from_fibers(&x, &y).unwrap().unwrap();
        assert!(w.verify(&x, &y));
        assert!(w.f.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn zero_relation_criterion_on_discrete_spaces() {
        let x = space("abc", &[&[0, 1, 1], &[1, 0, 0], &[1, 0, 0]]);
        let y = space("abc", &[&[0, 5, 5], &[5, 0, 0], &[5, 0, 0]]);
        assert_eq!(
            similar_iff_same_zero(&x, &y).unwrap(),
            ZeroCriterion { verdict: true, theorem_applicable: true }
        );
        let z = space("abc", &[&[0, 0, 1], &[0, 0, 1], &[1, 1, 0]]);
        assert_eq!(
            similar_iff_same_zero(&x, &z).unwrap(),
            ZeroCriterion { verdict: false, theorem_applicable: true }
        );
    }

    /// Different zero-relations on one ground set, yet similar through a
    /// bijection other than the identity: the criterion only speaks about
    /// similarity through `Id_X`.
    #[test]
    fn free_witness_can_move_zero_classes() {
        let x = space("abc", &[&[0, 0, 1], &[0, 0, 1], &[1, 1, 0]]);
        let y = space("abc", &[&[0, 1, 1], &[1, 0, 0], &[1, 0, 0]]);
        let w = find_similarity(&x, &y, 12).unwrap().unwrap();
        assert!(transports_zero_classes(&w, &x, &y));
        assert!(!similar_iff_same_zero(&x, &y).unwrap().verdict);
        assert!(identity_similarity_from_fibers(&x, &y).unwrap().is_none());
    }

    #[test]
    fn criterion_falls_back_outside_the_classes() {
        let x = space("abcd", &[&[0, 2, 3, 3], &[2, 0, 3, 3], &[3, 3, 0, 2], &[3, 3, 2, 0]]);
        let y = x.map_values(|t| t + t).unwrap();
        assert_eq!(
            similar_iff_same_zero(&x, &y).unwrap(),
            ZeroCriterion { verdict: true, theorem_applicable: false }
        );
    }
}
