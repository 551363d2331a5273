//! Slow, definition-level oracles shared by the integration tests. None of
//! them calls into the tree machinery of the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use ultraball::{Scalar, UltrametricSpace};

pub type Set = BTreeSet<usize>;

pub fn four_point() -> UltrametricSpace {
    ultraball::io::parse_space("a,b,c,d\n0,1,2,3\n1,0,2,3\n2,2,0,3\n3,3,3,0").unwrap()
}

pub fn equilateral_four() -> UltrametricSpace {
    UltrametricSpace::equilateral(["p", "q", "r", "s"], Scalar::from_integer(1))
}

/// Every triple, every axiom.
pub fn is_ultrametric(m: &[Vec<Scalar>]) -> bool {
    let n = m.len();
    (0..n).all(|i| {
        m[i][i].is_zero()
            && (0..n).all(|j| {
                m[i][j] == m[j][i]
                    && (i == j || !m[i][j].is_zero())
                    && (0..n).all(|k| m[i][j] <= std::cmp::max(m[i][k].clone(), m[k][j].clone()))
            })
    })
}

/// `B_r(t)` for every point `t` and every value `r` in its row.
pub fn balls(s: &UltrametricSpace) -> BTreeSet<Set> {
    let n = s.len();
    let mut out = BTreeSet::new();
    for t in 0..n {
        for r in (0..n).map(|x| s.dist(x, t)) {
            out.insert((0..n).filter(|&x| s.dist(x, t) <= r).collect());
        }
    }
    out
}

/// `(lower, upper)` pairs of the cover relation, found by checking every
/// triple.
pub fn covers(family: &BTreeSet<Set>) -> BTreeSet<(Set, Set)> {
    let strict = |a: &Set, b: &Set| a.is_subset(b) && a != b;
    let mut out = BTreeSet::new();
    for u in family {
        for v in family {
            if strict(u, v) && !family.iter().any(|w| strict(u, w) && strict(w, v)) {
                out.insert((u.clone(), v.clone()));
            }
        }
    }
    out
}

pub fn diameter(s: &UltrametricSpace, set: &Set) -> Scalar {
    set.iter()
        .flat_map(|&i| set.iter().map(move |&j| s.dist(i, j).clone()))
        .max()
        .expect("nonempty")
}

/// Recursive diametral splitting: `(leaf set, diameter)` for every internal
/// node, `(singleton, 0)` for leaves.
pub fn top_down_nodes(s: &UltrametricSpace) -> BTreeSet<(Set, Scalar)> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<Set> = vec![(0..s.len()).collect()];
    while let Some(set) = stack.pop() {
        let diam = diameter(s, &set);
        out.insert((set.clone(), diam.clone()));
        if set.len() == 1 {
            continue;
        }
        let mut rest = set;
        while let Some(&seed) = rest.iter().next() {
            let mut part: Set = [seed].into();
            let mut frontier = vec![seed];
            while let Some(u) = frontier.pop() {
                for &v in &rest {
                    if !part.contains(&v) && s.dist(u, v) < &diam {
                        part.insert(v);
                        frontier.push(v);
                    }
                }
            }
            rest = rest.difference(&part).copied().collect();
            stack.push(part);
        }
    }
    out
}

/// All bijections, checked against the ball families directly.
pub fn ball_equivalent(sx: &UltrametricSpace, sy: &UltrametricSpace) -> bool {
    let n = sx.len();
    if n != sy.len() {
        return false;
    }
    let (bx, by) = (balls(sx), balls(sy));
    (0..n).permutations(n).any(|p| {
        let image: BTreeSet<Set> = bx.iter().map(|b| b.iter().map(|&x| p[x]).collect()).collect();
        image == by
    })
}

pub fn isometric(sx: &UltrametricSpace, sy: &UltrametricSpace) -> bool {
    let n = sx.len();
    n == sy.len()
        && (0..n)
            .permutations(n)
            .any(|p| (0..n).all(|i| (0..n).all(|j| sx.dist(i, j) == sy.dist(p[i], p[j]))))
}

/// Rooted trees given as child lists: isomorphic iff some bijection maps
/// root to root and the parent relation onto the parent relation.
pub fn trees_isomorphic(a: &[Vec<usize>], ra: usize, b: &[Vec<usize>], rb: usize) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let arcs = |t: &[Vec<usize>]| -> BTreeSet<(usize, usize)> {
        t.iter().enumerate().flat_map(|(v, cs)| cs.iter().map(move |&c| (c, v))).collect()
    };
    let (aa, ab) = (arcs(a), arcs(b));
    (0..n)
        .permutations(n)
        .any(|p| p[ra] == rb && aa.iter().map(|&(c, v)| (p[c], p[v])).collect::<BTreeSet<_>>() == ab)
}
