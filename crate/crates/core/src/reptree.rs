//! The representing tree of a finite ultrametric space.
//!
//! The root stands for the whole space and is labeled with its diameter.
//! Its children are the parts of the diametral partition; a part with one
//! point becomes a leaf, any larger part becomes an internal node labeled
//! with the part's diameter and is split the same way. Labels strictly
//! decrease along every root-to-leaf path and the distance between two
//! points is the label of their lowest common ancestor.

use serde::Serialize;
use thiserror::Error;

use crate::isomorphism::class_ranks;
use crate::scalar::Scalar;
use crate::space::{PointSet, Subspace, UltrametricSpace};
use crate::tree::{Links, NodeId, RootedTree, TreeError, UnlabeledTree};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReptreeError {
    #[error("a diametral partition needs at least two points")]
    Singleton,
}

/// Parts of the diametral graph `G_d = G_d[X_1, ..., X_k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiametralPartition {
    /// Ordered by smallest member.
    pub parts: Vec<PointSet>,
    pub diameter: Scalar,
}

/// Splits a subspace of at least two points into the classes of the
/// relation `d(u, v) < diam`. Points in different classes are exactly at
/// the diameter.
pub fn diametral_partition(s: &Subspace<'_>) -> Result<DiametralPartition, ReptreeError> {
    if s.len() < 2 {
        return Err(ReptreeError::Singleton);
    }
    let members = s.members();
    let space = s.space();
    let diam = s.diameter_rank();
    let mut uf = UnionFind::new(members.len());
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            if space.rank(members[a], members[b]) < diam {
                uf.union(a, b);
            }
        }
    }
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; members.len()];
    for (a, &point) in members.iter().enumerate() {
        let root = uf.find(a);
        if slot[root] == usize::MAX {
            slot[root] = parts.len();
            parts.push(Vec::new());
        }
        parts[slot[root]].push(point);
    }
    Ok(DiametralPartition {
        parts: parts.into_iter().map(PointSet::new).collect(),
        diameter: space.value_of_rank(diam).clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    /// Diameter of the node's leaf set.
    Internal(Scalar),
    /// Index of the point this leaf stands for.
    Leaf(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepNode {
    pub kind: NodeKind,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
}

/// Labeled rooted tree of a space. Node ids are dense and assigned in
/// preorder over the canonical child order, so the root is always `0`.
///
/// Children are ordered by the class of their labeled subtree (height,
/// then label, then children's classes), ties broken by the smallest point
/// label in the subtree. The order carries no meaning beyond making output
/// reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepTree {
    nodes: Vec<RepNode>,
    leaf_of: Vec<NodeId>,
    depth: Vec<usize>,
}

impl RepTree {
    pub fn nodes(&self) -> &[RepNode] {
        &self.nodes
    }

    pub fn node(&self, v: NodeId) -> Result<&RepNode, TreeError> {
        self.nodes.get(v).ok_or(TreeError::UnknownNode(v))
    }

    /// Diameter label of an internal node, `None` for leaves.
    pub fn label(&self, v: NodeId) -> Option<&Scalar> {
        match &self.nodes[v].kind {
            NodeKind::Internal(l) => Some(l),
            NodeKind::Leaf(_) => None,
        }
    }

    pub fn point_count(&self) -> usize {
        self.leaf_of.len()
    }

    /// Node of the leaf standing for `point`.
    pub fn leaf_of(&self, point: usize) -> Result<NodeId, TreeError> {
        self.leaf_of.get(point).copied().ok_or(TreeError::UnknownPoint(point))
    }

    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v]
    }

    /// Lowest common ancestor by climbing parent pointers.
    pub fn lca(&self, mut u: NodeId, mut v: NodeId) -> NodeId {
        while self.depth[u] > self.depth[v] {
            u = self.nodes[u].parent.expect("depth > 0");
        }
        while self.depth[v] > self.depth[u] {
            v = self.nodes[v].parent.expect("depth > 0");
        }
        while u != v {
            u = self.nodes[u].parent.expect("common root");
            v = self.nodes[v].parent.expect("common root");
        }
        u
    }

    pub fn internal_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n.kind, NodeKind::Internal(_))).count()
    }
}

impl RootedTree for RepTree {
    fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn root(&self) -> NodeId {
        0
    }

    fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.nodes[v].parent
    }

    fn children(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[v].children
    }

    fn leaf_point(&self, v: NodeId) -> Option<usize> {
        match self.nodes[v].kind {
            NodeKind::Leaf(p) => Some(p),
            NodeKind::Internal(_) => None,
        }
    }
}

/// Scratch node used while merging clusters.
struct Draft {
    /// Rank of the label among the space's distance values; `None` for leaves.
    label: Option<u32>,
    point: Option<usize>,
    children: Vec<usize>,
}

/// Builds the representing tree.
///
/// Equivalent to recursive diametral splitting, but computed bottom-up:
/// clusters are merged along a minimum spanning tree in order of increasing
/// distance, and merges at the same distance collapse into one node. This
/// is `O(n²)` overall instead of `O(n²)` per tree level.
pub fn build_rep_tree(s: &UltrametricSpace) -> RepTree {
    let n = s.len();
    let mut drafts: Vec<Draft> = (0..n)
        .map(|p| Draft {
            label: None,
            point: Some(p),
            children: Vec::new(),
        })
        .collect();

    let adjacency = crate::space::minimum_spanning_tree(n, |i, j| s.rank(i, j));
    let mut edges: Vec<(u32, usize, usize)> = adjacency
        .iter()
        .enumerate()
        .flat_map(|(u, adj)| adj.iter().filter(move |&&(v, _)| u < v).map(move |&(v, w)| (w, u, v)))
        .collect();
    edges.sort_unstable();

    let mut uf = UnionFind::new(n);
    let mut top: Vec<usize> = (0..n).collect();
    for (h, u, v) in edges {
        let (a, b) = (top[uf.find(u)], top[uf.find(v)]);
        let merged = match (drafts[a].label == Some(h), drafts[b].label == Some(h)) {
            (true, true) => {
                let moved = std::mem::take(&mut drafts[b].children);
                drafts[a].children.extend(moved);
                a
            }
            (true, false) => {
                drafts[a].children.push(b);
                a
            }
            (false, true) => {
                drafts[b].children.push(a);
                b
            }
            (false, false) => {
                drafts.push(Draft {
                    label: Some(h),
                    point: None,
                    children: vec![a, b],
                });
                drafts.len() - 1
            }
        };
        let root = uf.union(u, v).expect("spanning tree edges join distinct clusters");
        top[root] = merged;
    }
    let root = if n == 0 { 0 } else { top[uf.find(0)] };
    finalize(s, drafts, root)
}

/// Orders children canonically and renumbers reachable drafts in preorder.
fn finalize(s: &UltrametricSpace, drafts: Vec<Draft>, root: usize) -> RepTree {
    let mut parents = vec![None; drafts.len()];
    for (v, d) in drafts.iter().enumerate() {
        for &c in &d.children {
            parents[c] = Some(v);
        }
    }
    let draft_tree = DraftTree {
        drafts: &drafts,
        parents,
        root,
    };
    let rank = class_ranks(&draft_tree, |v| drafts[v].label);

    // Position of each point label in sorted order, for tie-breaking.
    let mut by_label: Vec<usize> = (0..s.len()).collect();
    by_label.sort_by(|&a, &b| s.label(a).cmp(s.label(b)));
    let mut label_pos = vec![0usize; s.len()];
    for (pos, &p) in by_label.iter().enumerate() {
        label_pos[p] = pos;
    }
    let mut min_label = vec![usize::MAX; drafts.len()];
    for v in draft_tree.postorder() {
        min_label[v] = match drafts[v].point {
            Some(p) => label_pos[p],
            None => drafts[v].children.iter().map(|&c| min_label[c]).min().unwrap_or(usize::MAX),
        };
    }

    let mut nodes: Vec<RepNode> = Vec::with_capacity(drafts.len());
    let mut depth = Vec::with_capacity(drafts.len());
    let mut leaf_of = vec![0; s.len()];
    let mut stack = vec![(root, None::<NodeId>, 0usize)];
    while let Some((d, parent, level)) = stack.pop() {
        let id = nodes.len();
        if let Some(p) = parent {
            nodes[p].children.push(id);
        }
        let kind = match (drafts[d].label, drafts[d].point) {
            (Some(h), _) => NodeKind::Internal(s.value_of_rank(h).clone()),
            (None, Some(p)) => {
                leaf_of[p] = id;
                NodeKind::Leaf(p)
            }
            (None, None) => unreachable!("drafts are leaves or labeled"),
        };
        nodes.push(RepNode {
            kind,
            parent,
            children: Vec::new(),
        });
        depth.push(level);
        let mut kids = drafts[d].children.clone();
        kids.sort_by_key(|&c| (rank[c], min_label[c]));
        stack.extend(kids.into_iter().rev().map(|c| (c, Some(id), level + 1)));
    }
    RepTree { nodes, leaf_of, depth }
}

struct DraftTree<'a> {
    drafts: &'a [Draft],
    parents: Vec<Option<usize>>,
    root: usize,
}

impl RootedTree for DraftTree<'_> {
    fn node_count(&self) -> usize {
        self.drafts.len()
    }

    fn root(&self) -> NodeId {
        self.root
    }

    fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parents[v]
    }

    fn children(&self, v: NodeId) -> &[NodeId] {
        &self.drafts[v].children
    }

    fn leaf_point(&self, v: NodeId) -> Option<usize> {
        self.drafts[v].point
    }
}

/// Distance between two points read off the tree: zero for `x == y`, else
/// the label of their lowest common ancestor, which is the largest label on
/// the path between the two leaves.
pub fn distance_from_tree(t: &RepTree, x: usize, y: usize) -> Result<Scalar, TreeError> {
    let (u, v) = (t.leaf_of(x)?, t.leaf_of(y)?);
    if u == v {
        return Ok(Scalar::zero());
    }
    let lca = t.lca(u, v);
    Ok(t.label(lca).expect("an ancestor of two leaves is internal").clone())
}

/// Drops the diameter labels; node ids, child order and leaf points stay.
pub fn strip_labels(t: &RepTree) -> UnlabeledTree {
    let links = t
        .nodes
        .iter()
        .map(|n| Links {
            parent: n.parent,
            children: n.children.clone(),
        })
        .collect();
    let points = (0..t.node_count()).map(|v| t.leaf_point(v)).collect();
    UnlabeledTree::from_parts(links, points, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::gamma;

    fn space(points: &[&str], rows: &[&[&str]]) -> UltrametricSpace {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        UltrametricSpace::parse(points.iter().map(|s| s.to_string()).collect(), &rows).unwrap()
    }

    fn four_point() -> UltrametricSpace {
        space(
            &["a", "b", "c", "d"],
            &[
                &["0", "1", "2", "3"],
                &["1", "0", "2", "3"],
                &["2", "2", "0", "3"],
                &["3", "3", "3", "0"],
            ],
        )
    }

    fn int(n: u64) -> Scalar {
        Scalar::from_integer(n)
    }

    #[test]
    fn partition_examples() {
        let abc = space(&["a", "b", "c"], &[&["0", "1", "2"], &["1", "0", "2"], &["2", "2", "0"]]);
        let all = PointSet::new(vec![0, 1, 2]);
        let p = diametral_partition(&Subspace::new(&abc, &all).unwrap()).unwrap();
        assert_eq!(p.parts, vec![PointSet::new(vec![0, 1]), PointSet::singleton(2)]);
        assert_eq!(p.diameter, int(2));

        let eq = UltrametricSpace::equilateral(["a", "b", "c"], int(5));
        let p = diametral_partition(&Subspace::new(&eq, &all).unwrap()).unwrap();
        assert_eq!(p.parts.len(), 3);

        let two = UltrametricSpace::equilateral(["a", "b"], int(1));
        let both = PointSet::new(vec![0, 1]);
        assert_eq!(diametral_partition(&Subspace::new(&two, &both).unwrap()).unwrap().parts.len(), 2);

        let one = PointSet::singleton(0);
        assert_eq!(
            diametral_partition(&Subspace::new(&two, &one).unwrap()),
            Err(ReptreeError::Singleton)
        );
    }

    #[test]
    fn four_point_tree_shape() {
        let t = build_rep_tree(&four_point());
        assert_eq!(t.node_count(), 7);
        // root(3){leaf d, node(2){leaf c, node(1){leaf a, leaf b}}}
        assert_eq!(t.label(0), Some(&int(3)));
        assert_eq!(t.children(0), &[1, 2]);
        assert_eq!(t.leaf_point(1), Some(3));
        assert_eq!(t.label(2), Some(&int(2)));
        assert_eq!(t.children(2), &[3, 4]);
        assert_eq!(t.leaf_point(3), Some(2));
        assert_eq!(t.label(4), Some(&int(1)));
        assert_eq!(t.children(4), &[5, 6]);
        assert_eq!((t.leaf_point(5), t.leaf_point(6)), (Some(0), Some(1)));

        assert_eq!(gamma(&t, 2).unwrap().as_slice(), &[0, 1, 2]);
        assert_eq!(gamma(&t, 0).unwrap().len(), 4);
        assert_eq!(gamma(&t, 5).unwrap().as_slice(), &[0]);

        assert_eq!(distance_from_tree(&t, 0, 3).unwrap(), int(3));
        assert_eq!(distance_from_tree(&t, 0, 1).unwrap(), int(1));
        assert_eq!(distance_from_tree(&t, 2, 2).unwrap(), Scalar::zero());
        assert_eq!(distance_from_tree(&t, 0, 9), Err(TreeError::UnknownPoint(9)));
    }

    #[test]
    fn singleton_and_star() {
        let one = UltrametricSpace::equilateral(["x"], int(1));
        let t = build_rep_tree(&one);
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.leaf_point(0), Some(0));
        assert_eq!(strip_labels(&t).node_count(), 1);

        let star = build_rep_tree(&UltrametricSpace::equilateral(["a", "b", "c"], int(5)));
        assert_eq!(star.node_count(), 4);
        assert_eq!(star.label(0), Some(&int(5)));
        assert_eq!(star.children(0).len(), 3);
        let bare = strip_labels(&star);
        assert_eq!(bare.children(0), star.children(0));
    }

    #[test]
    fn strip_keeps_child_lists() {
        let t = build_rep_tree(&four_point());
        let u = strip_labels(&t);
        for v in 0..t.node_count() {
            assert_eq!(u.children(v), t.children(v));
            assert_eq!(u.leaf_point(v), t.leaf_point(v));
        }
    }
}
