//! Seeded random ultrametric spaces and tree shapes.
//!
//! A random rooted tree is grown top-down: a node owning `m > 1` leaves is
//! split into between 2 and [`MAX_ARITY`] nonempty groups, or into `m`
//! singletons once the depth bound is reached. Internal nodes then get
//! integer heights bottom-up (each strictly above its tallest child, by a
//! random step of at most `label_pool`), scaled by a per-space denominator.
//! Distances are the heights of lowest common ancestors, so every generated
//! matrix is an ultrametric by construction.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;
use crate::space::UltrametricSpace;
use crate::tree::UnlabeledTree;

pub const MAX_ARITY: usize = 4;

const DENOMINATORS: [u64; 5] = [1, 2, 3, 4, 10];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    /// Number of points, at least 1.
    pub n: usize,
    /// Maximum number of edges from the root to a leaf (at least 1).
    pub depth_bound: usize,
    /// Largest height step between a node and its tallest child. Small
    /// pools make coinciding labels on unrelated nodes common.
    pub label_pool: u32,
}

impl GenConfig {
    pub fn new(seed: u64, n: usize) -> Self {
        GenConfig {
            seed,
            n,
            depth_bound: 6,
            label_pool: 3,
        }
    }
}

/// Shape with nodes in preorder; each node owns a contiguous leaf range.
struct Shape {
    children: Vec<Vec<usize>>,
    leaf_start: Vec<usize>,
    leaf_count: Vec<usize>,
}

fn random_shape(rng: &mut ChaCha8Rng, leaves: usize, depth_bound: usize) -> Shape {
    let depth_bound = depth_bound.max(1);
    let mut shape = Shape {
        children: vec![Vec::new()],
        leaf_start: vec![0],
        leaf_count: vec![leaves],
    };
    let mut stack = vec![(0usize, 0usize)];
    while let Some((v, depth)) = stack.pop() {
        let m = shape.leaf_count[v];
        if m < 2 {
            continue;
        }
        let k = if depth + 1 >= depth_bound {
            m
        } else {
            rng.gen_range(2..=m.min(MAX_ARITY))
        };
        let mut cuts: Vec<usize> = if k == m {
            (1..m).collect()
        } else {
            index::sample(rng, m - 1, k - 1).into_iter().map(|c| c + 1).collect()
        };
        cuts.sort_unstable();
        cuts.push(m);
        let mut start = 0;
        let mut kids = Vec::with_capacity(k);
        for cut in cuts {
            let id = shape.children.len();
            shape.children.push(Vec::new());
            shape.leaf_start.push(shape.leaf_start[v] + start);
            shape.leaf_count.push(cut - start);
            kids.push(id);
            start = cut;
        }
        for &c in kids.iter().rev() {
            stack.push((c, depth + 1));
        }
        shape.children[v] = kids;
    }
    shape
}

/// Deterministic in `cfg`. Points are named `p0, p1, ...`.
pub fn generate_random(cfg: &GenConfig) -> UltrametricSpace {
    assert!(cfg.n >= 1, "a space needs at least one point");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n;
    let shape = random_shape(&mut rng, n, cfg.depth_bound);
    let pool = cfg.label_pool.max(1) as u64;

    // Node ids are preorder, so reverse id order visits children first.
    let mut height = vec![0u64; shape.children.len()];
    for v in (0..shape.children.len()).rev() {
        if let Some(top) = shape.children[v].iter().map(|&c| height[c]).max() {
            height[v] = top + rng.gen_range(1..=pool);
        }
    }
    let denom = DENOMINATORS[rng.gen_range(0..DENOMINATORS.len())];

    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(&mut rng);

    let mut distinct: Vec<u64> = height.clone();
    distinct.push(0);
    distinct.sort_unstable();
    distinct.dedup();
    let rank_of = |h: u64| distinct.binary_search(&h).expect("height is interned") as u32;

    let mut ranks = vec![0u32; n * n];
    for (v, kids) in shape.children.iter().enumerate() {
        let r = rank_of(height[v]);
        for (a, &ca) in kids.iter().enumerate() {
            for &cb in &kids[a + 1..] {
                for i in shape.leaf_start[ca]..shape.leaf_start[ca] + shape.leaf_count[ca] {
                    for j in shape.leaf_start[cb]..shape.leaf_start[cb] + shape.leaf_count[cb] {
                        let (x, y) = (points[i], points[j]);
                        ranks[x * n + y] = r;
                        ranks[y * n + x] = r;
                    }
                }
            }
        }
    }
    let values = distinct.iter().map(|&h| Scalar::from_ratio(h, denom)).collect();
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    UltrametricSpace::from_ranks(labels, values, ranks)
}

/// A random rooted tree with `leaves` leaves in which every internal node
/// has at least two children. Deterministic in `seed`.
pub fn random_unlabeled_tree(seed: u64, leaves: usize, depth_bound: usize) -> UnlabeledTree {
    assert!(leaves >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = random_shape(&mut rng, leaves, depth_bound);
    UnlabeledTree::from_children(shape.children, 0).expect("generated shape is a tree")
}
