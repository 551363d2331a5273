//! Rooted trees: a common read-only interface plus the label-free tree.

use thiserror::Error;

use crate::space::PointSet;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("node {0} does not exist")]
    UnknownNode(NodeId),
    #[error("point {0} is not a leaf of this tree")]
    UnknownPoint(usize),
    #[error("not a rooted tree: {0}")]
    Malformed(String),
}

/// Read access to a rooted tree with dense node ids `0..node_count()`.
///
/// Leaves may carry the index of the point they stand for.
pub trait RootedTree {
    fn node_count(&self) -> usize;
    fn root(&self) -> NodeId;
    fn parent(&self, v: NodeId) -> Option<NodeId>;
    fn children(&self, v: NodeId) -> &[NodeId];
    fn leaf_point(&self, v: NodeId) -> Option<usize>;

    fn is_leaf(&self, v: NodeId) -> bool {
        self.children(v).is_empty()
    }

    fn check_node(&self, v: NodeId) -> Result<(), TreeError> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(TreeError::UnknownNode(v))
        }
    }

    /// Parents before children, children in stored order.
    fn preorder(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.node_count());
        let mut stack = vec![self.root()];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children(v).iter().rev());
        }
        order
    }

    /// Children before parents.
    fn postorder(&self) -> Vec<NodeId> {
        let mut order = self.preorder();
        order.reverse();
        order
    }

    /// Edge count from the root.
    fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.node_count()];
        for v in self.preorder() {
            for &c in self.children(v) {
                depth[c] = depth[v] + 1;
            }
        }
        depth
    }

    /// Child→parent arcs, sorted.
    fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        let mut arcs: Vec<_> = (0..self.node_count()).filter_map(|v| self.parent(v).map(|p| (v, p))).collect();
        arcs.sort_unstable();
        arcs
    }
}

/// Leaf points of the subtree rooted at `v`; `{point(v)}` for a leaf.
pub fn gamma<T: RootedTree + ?Sized>(t: &T, v: NodeId) -> Result<PointSet, TreeError> {
    t.check_node(v)?;
    let mut points = Vec::new();
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        if t.is_leaf(u) {
            points.extend(t.leaf_point(u));
        }
        stack.extend_from_slice(t.children(u));
    }
    Ok(PointSet::new(points))
}

/// `gamma` for every node at once, indexed by node id.
pub fn gamma_all<T: RootedTree + ?Sized>(t: &T) -> Vec<PointSet> {
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); t.node_count()];
    for v in t.postorder() {
        if t.is_leaf(v) {
            sets[v].extend(t.leaf_point(v));
        } else {
            let mut merged = Vec::new();
            for &c in t.children(v) {
                merged.extend_from_slice(&sets[c]);
            }
            sets[v] = merged;
        }
    }
    sets.into_iter().map(PointSet::new).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Links {
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
}

/// A rooted tree with no node labels. Leaves still know which point they
/// stand for so that subtree leaf sets can be read off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnlabeledTree {
    links: Vec<Links>,
    points: Vec<Option<usize>>,
    root: NodeId,
}

impl UnlabeledTree {
    /// Build from child lists. Leaves are numbered as points `0, 1, ...` in
    /// node-id order.
    pub fn from_children(children: Vec<Vec<NodeId>>, root: NodeId) -> Result<Self, TreeError> {
        let n = children.len();
        if root >= n {
            return Err(TreeError::Malformed(format!("root {root} out of range")));
        }
        let mut parent = vec![None; n];
        for (v, cs) in children.iter().enumerate() {
            for &c in cs {
                if c >= n {
                    return Err(TreeError::UnknownNode(c));
                }
                if c == root || parent[c].is_some() {
                    return Err(TreeError::Malformed(format!("node {c} has more than one parent or is the root")));
                }
                parent[c] = Some(v);
            }
        }
        let mut leaves = 0;
        let points = children
            .iter()
            .map(|cs| {
                cs.is_empty().then(|| {
                    leaves += 1;
                    leaves - 1
                })
            })
            .collect();
        let links = parent
            .into_iter()
            .zip(children)
            .map(|(parent, children)| Links { parent, children })
            .collect();
        let tree = UnlabeledTree { links, points, root };
        if tree.preorder().len() != n {
            return Err(TreeError::Malformed("not connected".into()));
        }
        Ok(tree)
    }

    pub(crate) fn from_parts(links: Vec<Links>, points: Vec<Option<usize>>, root: NodeId) -> Self {
        UnlabeledTree { links, points, root }
    }

    /// A root with `leaves` leaf children (`leaves == 0` gives a single node).
    pub fn star(leaves: usize) -> Self {
        let mut children = vec![(1..=leaves).collect::<Vec<_>>()];
        children.extend((0..leaves).map(|_| Vec::new()));
        Self::from_children(children, 0).expect("star is a tree")
    }

    /// Internal nodes form a path; each has one leaf child and the last one
    /// has two. `leaves >= 2`.
    pub fn caterpillar(leaves: usize) -> Self {
        assert!(leaves >= 2);
        let mut children: Vec<Vec<NodeId>> = Vec::new();
        let spine = leaves - 1;
        for s in 0..spine {
            let leaf = spine + s;
            if s + 1 < spine {
                children.push(vec![leaf, s + 1]);
            } else {
                children.push(vec![leaf, spine + spine]);
            }
        }
        children.extend((0..leaves).map(|_| Vec::new()));
        Self::from_children(children, 0).expect("caterpillar is a tree")
    }

    /// Same tree with node ids renamed by `perm` (old id `v` becomes
    /// `perm[v]`). Leaf points are kept.
    pub fn relabel_nodes(&self, perm: &[NodeId]) -> Self {
        let n = self.node_count();
        assert_eq!(perm.len(), n);
        let mut links = vec![
            Links {
                parent: None,
                children: Vec::new()
            };
            n
        ];
        let mut points = vec![None; n];
        for v in 0..n {
            links[perm[v]] = Links {
                parent: self.links[v].parent.map(|p| perm[p]),
                children: self.links[v].children.iter().map(|&c| perm[c]).collect(),
            };
            points[perm[v]] = self.points[v];
        }
        UnlabeledTree {
            links,
            points,
            root: perm[self.root],
        }
    }
}

impl RootedTree for UnlabeledTree {
    fn node_count(&self) -> usize {
        self.links.len()
    }

    fn root(&self) -> NodeId {
        self.root
    }

    fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.links[v].parent
    }

    fn children(&self, v: NodeId) -> &[NodeId] {
        &self.links[v].children
    }

    fn leaf_point(&self, v: NodeId) -> Option<usize> {
        self.points[v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_and_caterpillar_shapes() {
        let s = UnlabeledTree::star(3);
        assert_eq!(s.node_count(), 4);
        assert_eq!(s.children(0), &[1, 2, 3]);
        assert_eq!(gamma(&s, 0).unwrap().as_slice(), &[0, 1, 2]);
        assert_eq!(gamma(&s, 2).unwrap().as_slice(), &[1]);

        let c = UnlabeledTree::caterpillar(3);
        assert_eq!(c.node_count(), 5);
        assert_eq!(c.depths().into_iter().max(), Some(2));
        assert_eq!(gamma_all(&c)[0].len(), 3);
        assert_eq!(UnlabeledTree::star(0).node_count(), 1);
    }

    #[test]
    fn rejects_non_trees() {
        assert!(UnlabeledTree::from_children(vec![vec![1], vec![0]], 0).is_err());
        assert!(UnlabeledTree::from_children(vec![vec![1], vec![], vec![]], 0).is_err());
        assert!(UnlabeledTree::from_children(vec![vec![1, 1], vec![]], 0).is_err());
        assert!(UnlabeledTree::from_children(vec![vec![5]], 0).is_err());
        assert_eq!(gamma(&UnlabeledTree::star(1), 9), Err(TreeError::UnknownNode(9)));
    }

    #[test]
    fn relabeling_keeps_shape() {
        let c = UnlabeledTree::caterpillar(3);
        let r = c.relabel_nodes(&[4, 3, 2, 1, 0]);
        assert_eq!(r.root(), 4);
        assert_eq!(r.arcs().len(), 4);
        assert_eq!(gamma(&r, 4).unwrap().len(), 3);
    }
}
