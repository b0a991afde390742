//! Validated finite pseudometric spaces.
//!
//! A [`PseudometricSpace`] owns its labels and an `n × n` matrix of exact
//! distances. On construction every distance is also encoded as an index
//! into the sorted [`DistanceRange`], so all later equality tests between
//! distances are integer comparisons.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::rational::Rational;

/// A pair of point indices `⟨x, y⟩`.
pub type Pair = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("EmptySpace")]
    EmptySpace,
    #[error("DuplicateLabel {0:?}")]
    DuplicateLabel(String),
    #[error("NonSquare: {points} points but row {row} has {len} entries")]
    NonSquare { points: usize, row: usize, len: usize },
    #[error("NegativeDistance at ({0},{1})")]
    NegativeDistance(usize, usize),
    #[error("NonZeroDiagonal at ({0},{0})")]
    NonZeroDiagonal(usize),
    #[error("Asymmetric at ({0},{1})")]
    Asymmetric(usize, usize),
    #[error("TriangleViolation at ({0},{1},{2})")]
    TriangleViolation(usize, usize, usize),
    #[error("ValueNotInRange {0}")]
    ValueNotInRange(Rational),
    #[error("EmptySubset")]
    EmptySubset,
    #[error("UnknownLabel {0:?}")]
    UnknownLabel(String),
}

/// The sorted set of distinct distances `d(X²)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceRange {
    values: Vec<Rational>,
}

impl DistanceRange {
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn position(&self, t: &Rational) -> Option<usize> {
        self.values.binary_search(t).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudometricSpace {
    labels: Vec<String>,
    dist: Vec<Rational>,
    range: DistanceRange,
    /// `codes[i * n + j]` is the index of `dist[i][j]` in `range`; zero is code 0.
    codes: Vec<u32>,
}

impl PseudometricSpace {
    /// Validates labels and a square distance matrix.
    ///
    /// Checks run in a fixed order (shape, sign, diagonal, symmetry,
    /// triangle inequality) and each reports the first offending index tuple
    /// in row-major order.
    pub fn validate(points: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<Self, SpaceError> {
        let n = points.len();
        if n == 0 && matrix.is_empty() {
            return Err(SpaceError::EmptySpace);
        }
        if matrix.len() != n {
            return Err(SpaceError::NonSquare {
                points: n,
                row: matrix.len().min(n),
                len: matrix.get(n).map_or(0, Vec::len),
            });
        }
        if let Some((row, r)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(SpaceError::NonSquare { points: n, row, len: r.len() });
        }
        let dist: Vec<Rational> = matrix.into_iter().flatten().collect();
        Self::from_row_major(points, dist)
    }

    /// Same as [`validate`](Self::validate) for a row-major flat matrix.
    pub fn from_row_major(points: Vec<String>, dist: Vec<Rational>) -> Result<Self, SpaceError> {
        let n = points.len();
        if n == 0 {
            return Err(SpaceError::EmptySpace);
        }
        if dist.len() != n * n {
            let (row, len) = if dist.len() < n * n {
                (dist.len() / n, dist.len() % n)
            } else {
                (n, dist.len() - n * n)
            };
            return Err(SpaceError::NonSquare { points: n, row, len });
        }
        let mut seen = BTreeSet::new();
        for label in &points {
            if !seen.insert(label.as_str()) {
                return Err(SpaceError::DuplicateLabel(label.clone()));
            }
        }
        Self::validate_flat(points, dist)
    }

    fn validate_flat(labels: Vec<String>, dist: Vec<Rational>) -> Result<Self, SpaceError> {
        let n = labels.len();
        let at = |i: usize, j: usize| &dist[i * n + j];
        for i in 0..n {
            for j in 0..n {
                if at(i, j).is_negative() {
                    return Err(SpaceError::NegativeDistance(i, j));
                }
            }
        }
        for i in 0..n {
            if !at(i, i).is_zero() {
                return Err(SpaceError::NonZeroDiagonal(i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if at(i, j) != at(j, i) {
                    return Err(SpaceError::Asymmetric(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if at(i, k) > &(at(i, j) + at(j, k)) {
                        return Err(SpaceError::TriangleViolation(i, j, k));
                    }
                }
            }
        }
        let values: Vec<Rational> = dist.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let index: HashMap<&Rational, u32> =
            values.iter().enumerate().map(|(k, v)| (v, k as u32)).collect();
        let codes = dist.iter().map(|v| index[v]).collect();
        Ok(PseudometricSpace {
            labels,
            dist,
            range: DistanceRange { values },
            codes,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: empty spaces are rejected at validation.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn distance(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i * self.len() + j]
    }

    /// Index of `d(i, j)` in [`range`](Self::range); `0` means distance zero.
    #[inline]
    pub fn code(&self, i: usize, j: usize) -> u32 {
        self.codes[i * self.labels.len() + j]
    }

    #[inline]
    pub fn is_zero(&self, i: usize, j: usize) -> bool {
        self.code(i, j) == 0
    }

    /// Row-major copy of the matrix.
    pub fn row_major(&self) -> &[Rational] {
        &self.dist
    }

    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        self.dist.chunks(self.len()).map(<[Rational]>::to_vec).collect()
    }

    pub fn range(&self) -> &DistanceRange {
        &self.range
    }

    /// `d⁻¹(t)` as ordered index pairs in row-major order.
    pub fn fiber(&self, t: &Rational) -> Result<Vec<Pair>, SpaceError> {
        let code = self
            .range
            .position(t)
            .ok_or_else(|| SpaceError::ValueNotInRange(t.clone()))? as u32;
        Ok(self.fiber_by_code(code))
    }

    pub(crate) fn fiber_by_code(&self, code: u32) -> Vec<Pair> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.code(i, j) == code)
            .collect()
    }

    /// Number of ordered pairs in each fiber, indexed by range position.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.range.len()];
        for &c in &self.codes {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Restriction to the given indices, in the given order.
    pub fn subspace_by_index(&self, indices: &[usize]) -> Result<Self, SpaceError> {
        if indices.is_empty() {
            return Err(SpaceError::EmptySubset);
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let dist = indices
            .iter()
            .flat_map(|&i| indices.iter().map(move |&j| self.distance(i, j).clone()))
            .collect();
        Self::from_row_major(labels, dist)
    }

    /// Restriction to a set of labels. The result keeps the parent's point order.
    pub fn subspace<S: AsRef<str>>(&self, subset: &[S]) -> Result<Self, SpaceError> {
        let indices = self.resolve(subset)?;
        self.subspace_by_index(&indices)
    }

    /// True iff the subset has pairwise positive distances.
    pub fn is_metric_subspace<S: AsRef<str>>(&self, subset: &[S]) -> Result<bool, SpaceError> {
        let indices = self.resolve(subset)?;
        Ok(self.is_metric_subset(&indices))
    }

    pub(crate) fn is_metric_subset(&self, indices: &[usize]) -> bool {
        indices.iter().enumerate().all(|(a, &i)| {
            indices[a + 1..].iter().all(|&j| i == j || !self.is_zero(i, j))
        })
    }

    /// True iff `d(x, y) > 0` whenever `x ≠ y`.
    pub fn is_metric(&self) -> bool {
        let all: Vec<usize> = (0..self.len()).collect();
        self.is_metric_subset(&all)
    }

    fn resolve<S: AsRef<str>>(&self, subset: &[S]) -> Result<Vec<usize>, SpaceError> {
        if subset.is_empty() {
            return Err(SpaceError::EmptySubset);
        }
        let mut wanted = BTreeSet::new();
        for s in subset {
            let i = self
                .index_of(s.as_ref())
                .ok_or_else(|| SpaceError::UnknownLabel(s.as_ref().to_string()))?;
            wanted.insert(i);
        }
        Ok(wanted.into_iter().collect())
    }

    /// The space with point `i` moved to position `perm[i]`.
    ///
    /// Distances are carried along, so the result is isometric to `self`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let n = self.len();
        assert_eq!(perm.len(), n, "relabeling must cover every point");
        let mut inverse = vec![usize::MAX; n];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        assert!(inverse.iter().all(|&i| i != usize::MAX), "relabeling must be a bijection");
        let labels = inverse.iter().map(|&i| self.labels[i].clone()).collect();
        let dist = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| self.distance(inverse[a], inverse[b]).clone())
            .collect();
        Self::from_row_major(labels, dist).expect("relabeling preserves the axioms")
    }

    /// Applies a value map to every distance and revalidates.
    pub fn map_values<F: Fn(&Rational) -> Rational>(&self, f: F) -> Result<Self, SpaceError> {
        Self::from_row_major(self.labels.clone(), self.dist.iter().map(f).collect())
    }

    /// Same matrix, different labels.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self, SpaceError> {
        assert_eq!(labels.len(), self.len());
        Self::from_row_major(labels, self.dist.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn labels(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    fn space(lbl: &str, rows: &[&[i64]]) -> Result<PseudometricSpace, SpaceError> {
        PseudometricSpace::validate(
            labels(lbl),
            rows.iter().map(|row| row.iter().map(|&v| r(v)).collect()).collect(),
        )
    }

    /// Vertices of a 3 × 4 rectangle, in cyclic order a, b, c, d.
    fn rectangle() -> PseudometricSpace {
        space(
            "abcd",
            &[&[0, 3, 5, 4], &[3, 0, 4, 5], &[5, 4, 0, 3], &[4, 5, 3, 0]],
        )
        .unwrap()
    }

    #[test]
    fn singleton_is_valid() {
        let s = space("a", &[&[0]]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.range().values(), &[r(0)]);
    }

    #[test]
    fn zero_pseudometric_is_valid() {
        let s = space("abc", &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]).unwrap();
        assert_eq!(s.range().values(), &[r(0)]);
        assert_eq!(s.fiber(&r(0)).unwrap().len(), 9);
    }

    #[test]
    fn errors_name_first_offender() {
        assert_eq!(
            space("abc", &[&[0, 1, 3], &[1, 0, 1], &[3, 1, 0]]),
            Err(SpaceError::TriangleViolation(0, 1, 2))
        );
        assert_eq!(space("ab", &[&[0, 1], &[2, 0]]), Err(SpaceError::Asymmetric(0, 1)));
        assert_eq!(space("ab", &[&[0, 1], &[1, 1]]), Err(SpaceError::NonZeroDiagonal(1)));
        assert_eq!(space("ab", &[&[0, -1], &[-1, 0]]), Err(SpaceError::NegativeDistance(0, 1)));
        assert!(matches!(space("ab", &[&[0, 1], &[1]]), Err(SpaceError::NonSquare { row: 1, .. })));
        assert!(matches!(space("ab", &[&[0, 1]]), Err(SpaceError::NonSquare { .. })));
        assert_eq!(
            PseudometricSpace::validate(vec![], vec![]),
            Err(SpaceError::EmptySpace)
        );
        assert_eq!(
            space("aa", &[&[0, 1], &[1, 0]]),
            Err(SpaceError::DuplicateLabel("a".into()))
        );
        assert_eq!(SpaceError::Asymmetric(0, 1).to_string(), "Asymmetric at (0,1)");
    }

    #[test]
    fn ranges() {
        assert_eq!(rectangle().range().values(), &[r(0), r(3), r(4), r(5)]);
        let two = space("ab", &[&[0, 7], &[7, 0]]).unwrap();
        assert_eq!(two.range().values(), &[r(0), r(7)]);
    }

    #[test]
    fn fibers() {
        let two = space("ab", &[&[0, 7], &[7, 0]]).unwrap();
        assert_eq!(two.fiber(&r(7)).unwrap(), vec![(0, 1), (1, 0)]);
        assert_eq!(two.fiber(&r(3)), Err(SpaceError::ValueNotInRange(r(3))));
        // side-3 edges of the rectangle are {a,b} and {c,d}
        assert_eq!(
            rectangle().fiber(&r(3)).unwrap(),
            vec![(0, 1), (1, 0), (2, 3), (3, 2)]
        );
        assert_eq!(rectangle().fiber_sizes(), vec![4, 4, 4, 4]);
    }

    #[test]
    fn rectangle_subspaces() {
        let rect = rectangle();
        let full = rect.subspace(rect.labels()).unwrap();
        assert_eq!(full, rect);
        for skip in 0..4 {
            let subset: Vec<&str> = rect
                .labels()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, l)| l.as_str())
                .collect();
            let sub = rect.subspace(&subset).unwrap();
            assert_eq!(sub.range().values(), &[r(0), r(3), r(4), r(5)]);
        }
        for a in rect.labels() {
            for b in rect.labels() {
                if a != b {
                    assert!(rect.is_metric_subspace(&[a, b]).unwrap());
                }
            }
        }
    }

    #[test]
    fn subspace_errors_and_metricity() {
        let z = space("abcde", &[&[0; 5], &[0; 5], &[0; 5], &[0; 5], &[0; 5]]).unwrap();
        let sub = z.subspace(&["b", "d"]).unwrap();
        assert_eq!(sub.len(), 2);
        assert_eq!(sub.range().values(), &[r(0)]);
        assert!(z.is_metric_subspace(&["c"]).unwrap());
        assert!(!z.is_metric_subspace(&["a", "b"]).unwrap());
        assert_eq!(z.subspace::<&str>(&[]), Err(SpaceError::EmptySubset));
        assert_eq!(z.subspace(&["q"]), Err(SpaceError::UnknownLabel("q".into())));
    }

    #[test]
    fn relabel_keeps_distances() {
        let rect = rectangle();
        let moved = rect.relabeled(&[2, 0, 3, 1]);
        for i in 0..4 {
            for j in 0..4 {
                let (a, b) = (rect.label(i), rect.label(j));
                let (mi, mj) = (moved.index_of(a).unwrap(), moved.index_of(b).unwrap());
                assert_eq!(rect.distance(i, j), moved.distance(mi, mj));
            }
        }
    }
}
