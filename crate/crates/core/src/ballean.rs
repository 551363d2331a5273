//! Balleans: the family of closed balls of a finite ultrametric space, its
//! inclusion order and the Hasse digraph of that order.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::isomorphism::IsoError;
use crate::reptree::RepTree;
use crate::scalar::Scalar;
use crate::space::{diameter, PointSet, Subspace, UltrametricSpace};
use crate::tree::{gamma_all, NodeId, RootedTree, UnlabeledTree};

/// A closed ball, identified by its member set. Any member is a center and
/// the radius is the diameter of the members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ball {
    pub members: PointSet,
    pub radius: Scalar,
}

impl Ball {
    /// True if `{x : d(x, t) <= radius}` equals the members for every
    /// member `t`.
    pub fn is_centerless(&self, s: &UltrametricSpace) -> bool {
        self.members.iter().all(|t| {
            let around: PointSet = (0..s.len()).filter(|&x| s.dist(x, t) <= &self.radius).collect();
            around == self.members
        })
    }
}

/// Deduplicated set of balls, ordered by size and then by member list.
#[derive(Debug, Clone)]
pub struct Ballean {
    balls: Vec<Ball>,
    index: HashMap<PointSet, usize>,
}

impl Ballean {
    fn from_balls(mut balls: Vec<Ball>) -> Self {
        balls.sort_by(|a, b| (a.members.len(), &a.members).cmp(&(b.members.len(), &b.members)));
        balls.dedup_by(|a, b| a.members == b.members);
        let index = balls.iter().enumerate().map(|(i, b)| (b.members.clone(), i)).collect();
        Ballean { balls, index }
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn contains(&self, members: &PointSet) -> bool {
        self.index.contains_key(members)
    }

    pub fn id_of(&self, members: &PointSet) -> Option<usize> {
        self.index.get(members).copied()
    }

    pub fn member_sets(&self) -> impl Iterator<Item = &PointSet> {
        self.balls.iter().map(|b| &b.members)
    }
}

impl PartialEq for Ballean {
    fn eq(&self, other: &Self) -> bool {
        self.balls == other.balls
    }
}

impl Eq for Ballean {}

/// All balls `B_r(t)` with `t` a point and `r` a distance from `t`.
pub fn enumerate_ballean(s: &UltrametricSpace) -> Ballean {
    let n = s.len();
    let mut found: HashSet<PointSet> = HashSet::new();
    let mut balls = Vec::new();
    for t in 0..n {
        let mut by_distance: Vec<usize> = (0..n).collect();
        by_distance.sort_by_key(|&x| s.rank(x, t));
        let mut end = 0;
        while end < n {
            let r = s.rank(by_distance[end], t);
            while end < n && s.rank(by_distance[end], t) == r {
                end += 1;
            }
            let members = PointSet::new(by_distance[..end].to_vec());
            if found.insert(members.clone()) {
                let radius = diameter(&Subspace::new(s, &members).expect("nonempty ball"));
                balls.push(Ball { members, radius });
            }
        }
    }
    Ballean::from_balls(balls)
}

/// The leaf sets of all subtrees of a representing tree. Each node's
/// radius is its label (zero for leaves).
pub fn ballean_from_tree(t: &RepTree) -> Ballean {
    let balls = gamma_all(t)
        .into_iter()
        .enumerate()
        .map(|(v, members)| Ball {
            members,
            radius: t.label(v).cloned().unwrap_or_else(Scalar::zero),
        })
        .collect();
    Ballean::from_balls(balls)
}

/// Vertices `0..vertex_count` with arcs `⟨lower, upper⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HasseDigraph {
    vertex_count: usize,
    arcs: Vec<(usize, usize)>,
}

impl HasseDigraph {
    pub fn new(vertex_count: usize, mut arcs: Vec<(usize, usize)>) -> Self {
        arcs.sort_unstable();
        arcs.dedup();
        HasseDigraph { vertex_count, arcs }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Sorted.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// The rooted tree described by the digraph: the unique vertex without
    /// an outgoing arc is the root, every other vertex has exactly one.
    pub fn to_tree(&self) -> Result<UnlabeledTree, IsoError> {
        let n = self.vertex_count;
        let mut out_degree = vec![0usize; n];
        let mut children = vec![Vec::new(); n];
        for &(u, v) in &self.arcs {
            if u >= n || v >= n {
                return Err(IsoError::NotTreeShaped(format!("arc ({u}, {v}) leaves the vertex set")));
            }
            out_degree[u] += 1;
            children[v].push(u);
        }
        let maxima: Vec<usize> = (0..n).filter(|&v| out_degree[v] == 0).collect();
        if maxima.len() != 1 {
            return Err(IsoError::NotTreeShaped(format!("{} maximal elements", maxima.len())));
        }
        if let Some(v) = (0..n).find(|&v| out_degree[v] > 1) {
            return Err(IsoError::NotTreeShaped(format!("vertex {v} has {} covers", out_degree[v])));
        }
        UnlabeledTree::from_children(children, maxima[0]).map_err(|e| IsoError::NotTreeShaped(e.to_string()))
    }
}

/// Cover relation of `(balls, ⊆)`: `⟨u, v⟩` when `u ⊊ v` and no ball lies
/// strictly between them.
pub fn hasse(b: &Ballean) -> HasseDigraph {
    let sets: Vec<&PointSet> = b.member_sets().collect();
    let mut arcs = Vec::new();
    for (u, lower) in sets.iter().enumerate() {
        let above: Vec<usize> = (0..sets.len()).filter(|&v| lower.is_strict_subset(sets[v])).collect();
        for &v in &above {
            let between = above.iter().any(|&w| w != v && sets[w].is_strict_subset(sets[v]));
            if !between {
                arcs.push((u, v));
            }
        }
    }
    HasseDigraph::new(sets.len(), arcs)
}

/// Child→parent arcs of a rooted tree as a digraph on its node ids.
pub fn tree_digraph<T: RootedTree + ?Sized>(t: &T) -> HasseDigraph {
    HasseDigraph::new(t.node_count(), t.arcs())
}

/// How many outer balls `check_ball_transitivity` examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub seed: u64,
    /// Spaces with at most this many points are checked exhaustively.
    pub exhaustive_up_to: usize,
    /// Outer balls drawn for larger spaces.
    pub samples: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            seed: 0,
            exhaustive_up_to: 8,
            samples: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    pub exhaustive: bool,
    pub outer_checked: usize,
    pub inner_checked: usize,
    /// `(Y, Z)` with `Y` a ball of the space and `Z` a ball of `Y` that is
    /// not a ball of the space.
    pub failure: Option<(PointSet, PointSet)>,
}

impl TransitivityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// For balls `Y` of the space and balls `Z` of the subspace `Y`, checks
/// that `Z` is also a ball of the whole space.
pub fn check_ball_transitivity(s: &UltrametricSpace, sampling: Sampling) -> TransitivityReport {
    let outer = enumerate_ballean(s);
    let exhaustive = s.len() <= sampling.exhaustive_up_to;
    let mut chosen: Vec<&PointSet> = outer.member_sets().collect();
    if !exhaustive {
        let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
        chosen.shuffle(&mut rng);
        chosen.truncate(sampling.samples);
    }
    let mut report = TransitivityReport {
        exhaustive,
        outer_checked: 0,
        inner_checked: 0,
        failure: None,
    };
    for y in chosen {
        report.outer_checked += 1;
        let sub = s.restrict(y);
        for z in enumerate_ballean(&sub).member_sets() {
            report.inner_checked += 1;
            let lifted = z.map(|i| y.as_slice()[i]);
            if !outer.contains(&lifted) {
                report.failure = Some((y.clone(), lifted));
                return report;
            }
        }
    }
    report
}

/// `u` is a child of `v` iff `Γ(u) ⊆ Γ(v)` and every `Γ(w)` squeezed between
/// them equals one of the two. Returns the first node pair where the two
/// sides disagree.
pub fn check_cover_criterion<T: RootedTree + ?Sized>(t: &T) -> Result<(), (NodeId, NodeId)> {
    let g = gamma_all(t);
    let n = t.node_count();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let is_child = t.parent(u) == Some(v);
            let criterion =
                g[u].is_subset(&g[v]) && (0..n).all(|w| !(g[u].is_subset(&g[w]) && g[w].is_subset(&g[v])) || g[u] == g[w] || g[w] == g[v]);
            if is_child != criterion {
                return Err((u, v));
            }
        }
    }
    Ok(())
}
