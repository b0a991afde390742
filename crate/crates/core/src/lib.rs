//! Finite pseudometric spaces, their combinatorial self-similarities, and
//! the discrete / strongly rigid / pseudorectangle classification.
//!
//! Distances are exact [`Rational`]s. A space is validated once on
//! construction; every other module takes a [`PseudometricSpace`] by
//! reference and never mutates it.

pub mod campaign;
pub mod classify;
pub mod construct;
pub mod groups;
pub mod partition;
pub mod rational;
pub mod similarity;
pub mod space;

pub use classify::{classify, metric_reflection, ClassificationReport, ClassifyOptions, MetricReflection};
pub use groups::{Permutation, PermutationGroup, DEFAULT_BRUTE_FORCE_BOUND};
pub use partition::{EquivalenceRelation, Partition};
pub use rational::Rational;
pub use space::{PseudometricSpace, SpaceError};
