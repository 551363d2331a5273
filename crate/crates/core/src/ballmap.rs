//! Ball-preserving bijections between finite ultrametric spaces.
//!
//! A bijection `F: X → Y` preserves balls when the image of every ball of
//! `X` is a ball of `Y` and the preimage of every ball of `Y` is a ball of
//! `X`. Such a bijection exists exactly when the label-free representing
//! trees of the two spaces are isomorphic, and a witness is obtained by
//! restricting a tree isomorphism to the leaves.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::ballean::{enumerate_ballean, hasse, Ballean};
use crate::exec::{self, Execution};
use crate::isomorphism::{labeled_tree_isomorphism, poset_isomorphism, tree_isomorphism, verify_digraph_bijection, NodeBijection};
use crate::reptree::{build_rep_tree, RepTree};
use crate::space::{PointSet, UltrametricSpace};
use crate::tree::RootedTree;

/// Default size cap for the brute-force oracles.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BallMapError {
    #[error("spaces have {domain} and {codomain} points")]
    SizeMismatch { domain: usize, codomain: usize },
    #[error("map is not a bijection: {0}")]
    NotBijective(String),
    #[error("unknown point label {0:?}")]
    UnknownLabel(String),
    #[error("{n} points exceed the brute-force cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
}

/// A bijection between the point sets of two spaces, as indices:
/// point `x` of the domain goes to `apply(x)` in the codomain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointBijection {
    map: Vec<usize>,
}

impl PointBijection {
    pub fn new(map: Vec<usize>) -> Result<Self, BallMapError> {
        let mut seen = vec![false; map.len()];
        for (x, &y) in map.iter().enumerate() {
            if y >= map.len() {
                return Err(BallMapError::NotBijective(format!("image {y} of {x} is out of range")));
            }
            if std::mem::replace(&mut seen[y], true) {
                return Err(BallMapError::NotBijective(format!("{y} is hit twice")));
            }
        }
        Ok(PointBijection { map })
    }

    pub fn identity(n: usize) -> Self {
        PointBijection { map: (0..n).collect() }
    }

    /// Build from a label map such as `{"a": "p", "b": "q"}`.
    pub fn from_labels(sx: &UltrametricSpace, sy: &UltrametricSpace, pairs: &BTreeMap<String, String>) -> Result<Self, BallMapError> {
        if sx.len() != sy.len() {
            return Err(BallMapError::SizeMismatch {
                domain: sx.len(),
                codomain: sy.len(),
            });
        }
        let to = sy.label_index();
        let mut map = vec![usize::MAX; sx.len()];
        for (a, b) in pairs {
            let x = sx.index_of(a).ok_or_else(|| BallMapError::UnknownLabel(a.clone()))?;
            let y = *to.get(b.as_str()).ok_or_else(|| BallMapError::UnknownLabel(b.clone()))?;
            map[x] = y;
        }
        if let Some(x) = map.iter().position(|&y| y == usize::MAX) {
            return Err(BallMapError::NotBijective(format!("{:?} has no image", sx.label(x))));
        }
        Self::new(map)
    }

    /// `(domain label, codomain label)` in domain order.
    pub fn to_labels(&self, sx: &UltrametricSpace, sy: &UltrametricSpace) -> BTreeMap<String, String> {
        self.map
            .iter()
            .enumerate()
            .map(|(x, &y)| (sx.label(x).to_string(), sy.label(y).to_string()))
            .collect()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn inverse(&self) -> PointBijection {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        PointBijection { map: inv }
    }

    pub fn image(&self, set: &PointSet) -> PointSet {
        set.map(|x| self.map[x])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// A ball of the domain whose image is not a ball.
    Image,
    /// A ball of the codomain whose preimage is not a ball.
    Preimage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallViolation {
    pub direction: Direction,
    /// In the indices of the space the ball belongs to.
    pub ball: PointSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preservation {
    Preserving,
    Violated(BallViolation),
}

impl Preservation {
    pub fn is_preserving(&self) -> bool {
        matches!(self, Preservation::Preserving)
    }
}

fn first_violation(f: &PointBijection, bx: &Ballean, by: &Ballean) -> Option<BallViolation> {
    if let Some(ball) = bx.member_sets().find(|b| !by.contains(&f.image(b))) {
        return Some(BallViolation {
            direction: Direction::Image,
            ball: ball.clone(),
        });
    }
    let inv = f.inverse();
    by.member_sets().find(|b| !bx.contains(&inv.image(b))).map(|ball| BallViolation {
        direction: Direction::Preimage,
        ball: ball.clone(),
    })
}

/// Checks images of all balls of `sx`, then preimages of all balls of
/// `sy`, and reports the first ball that fails.
pub fn is_ball_preserving(f: &PointBijection, sx: &UltrametricSpace, sy: &UltrametricSpace) -> Result<Preservation, BallMapError> {
    if sx.len() != sy.len() || f.len() != sx.len() {
        return Err(BallMapError::SizeMismatch {
            domain: sx.len(),
            codomain: sy.len(),
        });
    }
    let bx = enumerate_ballean(sx);
    let by = enumerate_ballean(sy);
    Ok(match first_violation(f, &bx, &by) {
        None => Preservation::Preserving,
        Some(v) => Preservation::Violated(v),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    TreeReduction,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallDecision {
    pub equivalent: bool,
    /// Present exactly when `equivalent`.
    pub witness: Option<PointBijection>,
    pub method: Method,
}

impl BallDecision {
    fn from_witness(witness: Option<PointBijection>, method: Method) -> Self {
        BallDecision {
            equivalent: witness.is_some(),
            witness,
            method,
        }
    }
}

/// Restricts a node bijection between two representing trees to the leaves.
fn leaf_restriction(tx: &RepTree, ty: &RepTree, f: &NodeBijection) -> PointBijection {
    let map = (0..tx.point_count())
        .map(|x| {
            let leaf = tx.leaf_of(x).expect("every point has a leaf");
            ty.leaf_point(f.apply(leaf)).expect("isomorphisms send leaves to leaves")
        })
        .collect();
    PointBijection { map }
}

/// Decides whether a ball-preserving bijection exists by comparing the
/// label-free representing trees. A positive answer comes with the leaf
/// restriction of the canonical tree isomorphism, re-checked against the
/// definition before it is returned.
pub fn exists_ball_preserving_bijection(sx: &UltrametricSpace, sy: &UltrametricSpace) -> BallDecision {
    let tx = build_rep_tree(sx);
    let ty = build_rep_tree(sy);
    let witness = tree_isomorphism(&tx, &ty).map(|f| leaf_restriction(&tx, &ty, &f));
    if let Some(w) = &witness {
        let check = is_ball_preserving(w, sx, sy).expect("witness sizes match");
        assert!(
            check.is_preserving(),
            "tree isomorphism produced a non-ball-preserving map: {check:?}"
        );
    }
    BallDecision::from_witness(witness, Method::TreeReduction)
}

/// Lexicographically first permutation index set starting with `first`
/// that satisfies `accept`.
fn first_permutation<T>(n: usize, first: usize, accept: impl Fn(&[usize]) -> Option<T>) -> Option<T> {
    let rest: Vec<usize> = (0..n).filter(|&y| y != first).collect();
    rest.into_iter().permutations(n - 1).find_map(|tail| {
        let mut perm = Vec::with_capacity(n);
        perm.push(first);
        perm.extend(tail);
        accept(&perm)
    })
}

/// Tries every bijection in lexicographic order of the image sequence and
/// returns the first ball-preserving one.
pub fn brute_force_exists(sx: &UltrametricSpace, sy: &UltrametricSpace, cap: usize) -> Result<BallDecision, BallMapError> {
    brute_force_exists_with(sx, sy, cap, Execution::default())
}

/// [`brute_force_exists`] with an explicit execution mode. The result does
/// not depend on the mode.
pub fn brute_force_exists_with(
    sx: &UltrametricSpace,
    sy: &UltrametricSpace,
    cap: usize,
    exec: Execution,
) -> Result<BallDecision, BallMapError> {
    let n = sx.len();
    if n > cap || sy.len() > cap {
        return Err(BallMapError::CapExceeded { n: n.max(sy.len()), cap });
    }
    if n != sy.len() {
        return Ok(BallDecision::from_witness(None, Method::BruteForce));
    }
    let bx = enumerate_ballean(sx);
    let by = enumerate_ballean(sy);
    let witness = exec::find_map_first(exec, n, |first| {
        first_permutation(n, first, |perm| {
            let f = PointBijection { map: perm.to_vec() };
            first_violation(&f, &bx, &by).is_none().then_some(f)
        })
    });
    Ok(BallDecision::from_witness(witness, Method::BruteForce))
}

/// `B₁ ⊆ B₂ ⟺ F(B₁) ⊆ F(B₂)` for every pair of balls of the domain.
pub fn preserves_inclusion(f: &PointBijection, bx: &Ballean) -> bool {
    let images: Vec<PointSet> = bx.member_sets().map(|b| f.image(b)).collect();
    let sets: Vec<&PointSet> = bx.member_sets().collect();
    (0..sets.len()).all(|i| (0..sets.len()).all(|j| sets[i].is_subset(sets[j]) == images[i].is_subset(&images[j])))
}

/// Outcome of comparing the poset-isomorphism route with the
/// ball-preserving-bijection route for one pair of spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub poset_isomorphic: bool,
    pub ball_equivalent: bool,
    /// Whether the poset witness passed the independent arc check.
    pub poset_witness_verified: Option<bool>,
    /// Whether the ball-map witness preserves inclusion in both directions
    /// over all ball pairs, and maps the ballean onto the other ballean.
    pub inclusion_preserved: Option<bool>,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.poset_isomorphic == self.ball_equivalent
            && self.poset_witness_verified != Some(false)
            && self.inclusion_preserved != Some(false)
    }
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "posets isomorphic: {}, ball-preserving bijection: {}, consistent: {}",
            self.poset_isomorphic,
            self.ball_equivalent,
            self.consistent()
        )
    }
}

/// Decides poset isomorphism of the two balleans and existence of a
/// ball-preserving bijection independently and reports whether they agree.
pub fn posets_isomorphic_iff_ballmap(sx: &UltrametricSpace, sy: &UltrametricSpace) -> ConsistencyReport {
    let bx = enumerate_ballean(sx);
    let by = enumerate_ballean(sy);
    let (hx, hy) = (hasse(&bx), hasse(&by));
    let poset = poset_isomorphism(&hx, &hy).expect("balleans of ultrametric spaces are tree-shaped");
    let decision = exists_ball_preserving_bijection(sx, sy);
    let inclusion_preserved = decision.witness.as_ref().map(|w| {
        let onto: HashSet<PointSet> = bx.member_sets().map(|b| w.image(b)).collect();
        preserves_inclusion(w, &bx) && onto.len() == by.len() && onto.iter().all(|b| by.contains(b))
    });
    ConsistencyReport {
        poset_isomorphic: poset.is_some(),
        ball_equivalent: decision.equivalent,
        poset_witness_verified: poset.as_ref().map(|f| verify_digraph_bijection(&hx, &hy, f)),
        inclusion_preserved,
    }
}

/// An isometry between the spaces, found by matching the labeled
/// representing trees.
pub fn find_isometry(sx: &UltrametricSpace, sy: &UltrametricSpace) -> Option<PointBijection> {
    let tx = build_rep_tree(sx);
    let ty = build_rep_tree(sy);
    labeled_tree_isomorphism(&tx, &ty).map(|f| leaf_restriction(&tx, &ty, &f))
}

pub fn is_isometry(f: &PointBijection, sx: &UltrametricSpace, sy: &UltrametricSpace) -> bool {
    let n = sx.len();
    n == sy.len() && f.len() == n && (0..n).all(|i| (0..n).all(|j| sx.dist(i, j) == sy.dist(f.apply(i), f.apply(j))))
}

/// First isometry in lexicographic order, by exhaustive search.
pub fn brute_force_isometry(sx: &UltrametricSpace, sy: &UltrametricSpace, cap: usize) -> Result<Option<PointBijection>, BallMapError> {
    let n = sx.len();
    if n > cap || sy.len() > cap {
        return Err(BallMapError::CapExceeded { n: n.max(sy.len()), cap });
    }
    if n != sy.len() {
        return Ok(None);
    }
    Ok((0..n).find_map(|first| {
        first_permutation(n, first, |perm| {
            let f = PointBijection { map: perm.to_vec() };
            is_isometry(&f, sx, sy).then_some(f)
        })
    }))
}
