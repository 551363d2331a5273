//! Finite ultrametric spaces, their representing trees and balleans, and
//! decision procedures for ball-preserving bijections and isometries.
//!
//! Distances are exact rationals. A space is summarized by its representing
//! tree, whose subtrees are exactly the balls of the space; questions about
//! balls reduce to rooted-tree isomorphism, which is decided through
//! canonical forms and cross-checked against exhaustive oracles.

pub mod ballean;
pub mod ballmap;
pub mod exec;
pub mod export;
pub mod generate;
pub mod io;
pub mod isomorphism;
pub mod reptree;
pub mod scalar;
pub mod selfcheck;
pub mod space;
pub mod tree;
mod union_find;

pub use ballean::{enumerate_ballean, hasse, Ball, Ballean, HasseDigraph};
pub use ballmap::{exists_ball_preserving_bijection, find_isometry, is_ball_preserving, BallDecision, PointBijection, Preservation};
pub use exec::Execution;
pub use isomorphism::{canonical_labeled, canonical_unlabeled, tree_isomorphism, CanonicalForm, NodeBijection};
pub use reptree::{build_rep_tree, distance_from_tree, RepTree};
pub use scalar::Scalar;
pub use space::{PointSet, UltrametricSpace, ValidationError};
pub use tree::{NodeId, RootedTree, UnlabeledTree};
