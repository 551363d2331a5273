//! Canonical forms and isomorphism witnesses for rooted trees and for the
//! tree-shaped Hasse digraphs of balleans.
//!
//! Subtree classes are ranked bottom-up, AHU style. Every node gets the rank
//! of its isomorphism class under a fixed total order on classes:
//! first by height, then by node tag (the diameter label in the labeled
//! variant), then lexicographically by the sorted ranks of its children.
//! Because the order depends only on the class, sorting children by rank
//! puts any two isomorphic trees into the same ordered shape, and the
//! preorder encoding of that shape is the canonical code.

use std::collections::HashSet;

use thiserror::Error;

use crate::ballean::HasseDigraph;
use crate::reptree::RepTree;
use crate::tree::{NodeId, RootedTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("tree with {nodes} nodes exceeds the brute-force cap of {cap}")]
    CapExceeded { nodes: usize, cap: usize },
    #[error("digraph is not the Hasse diagram of a tree-shaped poset: {0}")]
    NotTreeShaped(String),
}

/// Default node cap for [`brute_force_tree_iso`].
pub const DEFAULT_TREE_CAP: usize = 10;

/// Byte code that is equal for two trees exactly when they are isomorphic.
///
/// Layout, in canonical preorder: for each node its child count as LEB128,
/// followed in the labeled variant by the length-prefixed `p/q` rendering
/// of its label (internal nodes only).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A total map between the node sets of two trees (or vertex sets of two
/// digraphs): `map[u]` is the image of `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeBijection {
    map: Vec<NodeId>,
}

impl NodeBijection {
    pub fn new(map: Vec<NodeId>) -> Self {
        NodeBijection { map }
    }

    pub fn identity(n: usize) -> Self {
        NodeBijection { map: (0..n).collect() }
    }

    pub fn apply(&self, u: NodeId) -> NodeId {
        self.map[u]
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `None` unless the map is a permutation of `0..len`.
    pub fn inverse(&self) -> Option<NodeBijection> {
        let mut inv = vec![usize::MAX; self.map.len()];
        for (u, &v) in self.map.iter().enumerate() {
            if v >= inv.len() || inv[v] != usize::MAX {
                return None;
            }
            inv[v] = u;
        }
        Some(NodeBijection { map: inv })
    }
}

/// Class rank of every node; equal ranks within one tree mean isomorphic
/// subtrees (with equal tags).
pub(crate) fn class_ranks<T, K>(t: &T, tag: impl Fn(NodeId) -> K) -> Vec<u32>
where
    T: RootedTree + ?Sized,
    K: Ord,
{
    let n = t.node_count();
    let mut height = vec![0usize; n];
    let mut by_height: Vec<Vec<NodeId>> = Vec::new();
    for v in t.postorder() {
        height[v] = t.children(v).iter().map(|&c| height[c] + 1).max().unwrap_or(0);
        if by_height.len() <= height[v] {
            by_height.resize_with(height[v] + 1, Vec::new);
        }
        by_height[height[v]].push(v);
    }

    let mut rank = vec![0u32; n];
    let mut next = 0u32;
    for level in by_height {
        let mut keyed: Vec<(K, Vec<u32>, NodeId)> = level
            .into_iter()
            .map(|v| {
                let mut kids: Vec<u32> = t.children(v).iter().map(|&c| rank[c]).collect();
                kids.sort_unstable();
                (tag(v), kids, v)
            })
            .collect();
        keyed.sort_unstable_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        for i in 0..keyed.len() {
            if i > 0 && (&keyed[i].0, &keyed[i].1) != (&keyed[i - 1].0, &keyed[i - 1].1) {
                next += 1;
            }
            rank[keyed[i].2] = next;
        }
        next += 1;
    }
    rank
}

/// Children of every node sorted by class rank; ties keep stored order.
fn ordered_children<T: RootedTree + ?Sized>(t: &T, rank: &[u32]) -> Vec<Vec<NodeId>> {
    (0..t.node_count())
        .map(|v| {
            let mut kids = t.children(v).to_vec();
            kids.sort_by_key(|&c| rank[c]);
            kids
        })
        .collect()
}

fn push_varint(out: &mut Vec<u8>, mut x: usize) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        } else {
            out.push(byte | 0x80);
        }
    }
}

fn encode(root: NodeId, ordered: &[Vec<NodeId>], tag_bytes: impl Fn(NodeId) -> Option<Vec<u8>>) -> CanonicalForm {
    let mut out = Vec::with_capacity(ordered.len() * 2);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        push_varint(&mut out, ordered[v].len());
        if let Some(bytes) = tag_bytes(v) {
            push_varint(&mut out, bytes.len());
            out.extend_from_slice(&bytes);
        }
        stack.extend(ordered[v].iter().rev());
    }
    CanonicalForm(out)
}

struct Canonical {
    ordered: Vec<Vec<NodeId>>,
    form: CanonicalForm,
}

fn canonicalize_unlabeled<T: RootedTree + ?Sized>(t: &T) -> Canonical {
    let rank = class_ranks(t, |_| ());
    let ordered = ordered_children(t, &rank);
    let form = encode(t.root(), &ordered, |_| None);
    Canonical { ordered, form }
}

fn canonicalize_labeled(t: &RepTree) -> Canonical {
    let rank = class_ranks(t, |v| t.label(v));
    let ordered = ordered_children(t, &rank);
    let form = encode(t.root(), &ordered, |v| t.label(v).map(|l| l.to_ratio_string().into_bytes()));
    Canonical { ordered, form }
}

/// Code of the tree's shape; node tags and leaf points are ignored.
pub fn canonical_unlabeled<T: RootedTree + ?Sized>(t: &T) -> CanonicalForm {
    canonicalize_unlabeled(t).form
}

/// Code of a representing tree including its diameter labels. Leaf point
/// names are not part of the code, so two spaces get equal codes exactly
/// when they are isometric.
pub fn canonical_labeled(t: &RepTree) -> CanonicalForm {
    canonicalize_labeled(t).form
}

/// Pair up nodes by walking both canonical orders in lockstep. Only valid
/// once the codes are known to be equal.
fn align(root_a: NodeId, a: &[Vec<NodeId>], root_b: NodeId, b: &[Vec<NodeId>]) -> NodeBijection {
    let mut map = vec![usize::MAX; a.len()];
    let mut stack = vec![(root_a, root_b)];
    while let Some((u, v)) = stack.pop() {
        map[u] = v;
        debug_assert_eq!(a[u].len(), b[v].len());
        stack.extend(a[u].iter().copied().zip(b[v].iter().copied()));
    }
    NodeBijection { map }
}

/// Root-preserving isomorphism of the underlying shapes, if one exists.
pub fn tree_isomorphism<A, B>(a: &A, b: &B) -> Option<NodeBijection>
where
    A: RootedTree + ?Sized,
    B: RootedTree + ?Sized,
{
    if a.node_count() != b.node_count() {
        return None;
    }
    let ca = canonicalize_unlabeled(a);
    let cb = canonicalize_unlabeled(b);
    (ca.form == cb.form).then(|| align(a.root(), &ca.ordered, b.root(), &cb.ordered))
}

/// Label-preserving isomorphism of two representing trees, if one exists.
/// Restricted to leaves it is an isometry of the spaces.
pub fn labeled_tree_isomorphism(a: &RepTree, b: &RepTree) -> Option<NodeBijection> {
    if a.node_count() != b.node_count() {
        return None;
    }
    let ca = canonicalize_labeled(a);
    let cb = canonicalize_labeled(b);
    (ca.form == cb.form).then(|| align(a.root(), &ca.ordered, b.root(), &cb.ordered))
}

/// Independent check that `f` is a rooted-tree isomorphism: a bijection,
/// root to root, and `⟨u, v⟩` is an arc of `a` iff `⟨f(u), f(v)⟩` is an
/// arc of `b`.
pub fn verify_tree_bijection<A, B>(a: &A, b: &B, f: &NodeBijection) -> bool
where
    A: RootedTree + ?Sized,
    B: RootedTree + ?Sized,
{
    if a.node_count() != b.node_count() || f.len() != a.node_count() {
        return false;
    }
    if f.apply(a.root()) != b.root() {
        return false;
    }
    verify_arc_bijection(&a.arcs(), &b.arcs(), f)
}

fn verify_arc_bijection(arcs_a: &[(NodeId, NodeId)], arcs_b: &[(NodeId, NodeId)], f: &NodeBijection) -> bool {
    let Some(inv) = f.inverse() else {
        return false;
    };
    let set_a: HashSet<_> = arcs_a.iter().copied().collect();
    let set_b: HashSet<_> = arcs_b.iter().copied().collect();
    let forward = arcs_a.iter().all(|&(u, v)| set_b.contains(&(f.apply(u), f.apply(v))));
    let backward = arcs_b.iter().all(|&(u, v)| set_a.contains(&(inv.apply(u), inv.apply(v))));
    forward && backward
}

/// Exhaustive search for a root-preserving isomorphism, for cross-checking
/// the canonical forms on small trees. Nodes of `a` are assigned in preorder;
/// a candidate image must not be taken yet and must hang below the image of
/// the node's parent. Every complete assignment is re-verified.
pub fn brute_force_tree_iso<A, B>(a: &A, b: &B, cap: usize) -> Result<Option<NodeBijection>, IsoError>
where
    A: RootedTree + ?Sized,
    B: RootedTree + ?Sized,
{
    for nodes in [a.node_count(), b.node_count()] {
        if nodes > cap {
            return Err(IsoError::CapExceeded { nodes, cap });
        }
    }
    if a.node_count() != b.node_count() {
        return Ok(None);
    }
    let order = a.preorder();
    let mut map = vec![usize::MAX; a.node_count()];
    let mut used = vec![false; b.node_count()];
    map[a.root()] = b.root();
    used[b.root()] = true;

    fn search<A, B>(a: &A, b: &B, order: &[NodeId], at: usize, map: &mut Vec<NodeId>, used: &mut Vec<bool>) -> bool
    where
        A: RootedTree + ?Sized,
        B: RootedTree + ?Sized,
    {
        if at == order.len() {
            return verify_tree_bijection(a, b, &NodeBijection { map: map.clone() });
        }
        let u = order[at];
        let image_parent = map[a.parent(u).expect("non-root in preorder tail")];
        for w in 0..b.node_count() {
            if used[w] || b.parent(w) != Some(image_parent) {
                continue;
            }
            map[u] = w;
            used[w] = true;
            if search(a, b, order, at + 1, map, used) {
                return true;
            }
            used[w] = false;
            map[u] = usize::MAX;
        }
        false
    }

    Ok(search(a, b, &order, 1, &mut map, &mut used).then_some(NodeBijection { map }))
}

/// Isomorphism of two ballean posets given by their Hasse digraphs,
/// decided on the rooted trees they describe (root = the maximum ball).
/// The witness maps vertex ids of `h1` to vertex ids of `h2`.
pub fn poset_isomorphism(h1: &HasseDigraph, h2: &HasseDigraph) -> Result<Option<NodeBijection>, IsoError> {
    let t1 = h1.to_tree()?;
    let t2 = h2.to_tree()?;
    Ok(tree_isomorphism(&t1, &t2))
}

/// Independent check that `f` is a digraph isomorphism between `h1` and `h2`.
pub fn verify_digraph_bijection(h1: &HasseDigraph, h2: &HasseDigraph, f: &NodeBijection) -> bool {
    h1.vertex_count() == h2.vertex_count() && f.len() == h1.vertex_count() && verify_arc_bijection(h1.arcs(), h2.arcs(), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::UnlabeledTree;

    #[test]
    fn star_codes() {
        let a = UnlabeledTree::star(3);
        let b = UnlabeledTree::star(3).relabel_nodes(&[3, 1, 0, 2]);
        assert_eq!(canonical_unlabeled(&a), canonical_unlabeled(&b));
        assert_ne!(canonical_unlabeled(&a), canonical_unlabeled(&UnlabeledTree::caterpillar(3)));
        assert_eq!(
            canonical_unlabeled(&UnlabeledTree::star(0)),
            canonical_unlabeled(&UnlabeledTree::star(0))
        );
        assert_eq!(canonical_unlabeled(&a).as_bytes(), &[3, 0, 0, 0]);
    }

    #[test]
    fn shuffled_star_witness_is_verified() {
        let a = UnlabeledTree::star(3);
        let b = a.relabel_nodes(&[2, 0, 3, 1]);
        let f = tree_isomorphism(&a, &b).unwrap();
        assert!(verify_tree_bijection(&a, &b, &f));
        assert_eq!(f.apply(0), 2);
        let id = tree_isomorphism(&a, &a).unwrap();
        assert_eq!(id, NodeBijection::identity(4));
    }

    #[test]
    fn star_vs_caterpillar_has_no_isomorphism() {
        let star = UnlabeledTree::star(3);
        let cat = UnlabeledTree::caterpillar(3);
        assert!(tree_isomorphism(&star, &cat).is_none());
        // star(3) has 4 nodes, caterpillar(3) has 5: the oracle says no as well.
        assert_eq!(brute_force_tree_iso(&star, &cat, 10), Ok(None));
        assert_eq!(brute_force_tree_iso(&star, &UnlabeledTree::star(4), 10), Ok(None));
    }

    #[test]
    fn equal_size_non_isomorphic_pair() {
        // root{leaf, x{leaf, leaf, leaf}} vs root{x{leaf, leaf}, y{leaf}}
        let a = UnlabeledTree::from_children(vec![vec![1, 2], vec![], vec![3, 4, 5], vec![], vec![], vec![]], 0).unwrap();
        let b = UnlabeledTree::from_children(vec![vec![1, 2], vec![3, 4], vec![5], vec![], vec![], vec![]], 0).unwrap();
        assert!(tree_isomorphism(&a, &b).is_none());
        assert_eq!(brute_force_tree_iso(&a, &b, 10), Ok(None));
    }

    #[test]
    fn brute_force_respects_cap_and_finds_identity() {
        let t = UnlabeledTree::caterpillar(4);
        assert_eq!(brute_force_tree_iso(&t, &t, 10).unwrap(), Some(NodeBijection::identity(7)));
        assert_eq!(
            brute_force_tree_iso(&UnlabeledTree::star(10), &t, 10),
            Err(IsoError::CapExceeded { nodes: 11, cap: 10 })
        );
    }

    #[test]
    fn verifier_rejects_bad_maps() {
        let t = UnlabeledTree::star(2);
        assert!(!verify_tree_bijection(&t, &t, &NodeBijection::new(vec![1, 0, 2])));
        assert!(!verify_tree_bijection(&t, &t, &NodeBijection::new(vec![0, 1, 1])));
        assert!(verify_tree_bijection(&t, &t, &NodeBijection::new(vec![0, 2, 1])));
    }

    #[test]
    fn varint_encoding() {
        let mut out = Vec::new();
        push_varint(&mut out, 300);
        assert_eq!(out, [0xac, 0x02]);
    }
}
