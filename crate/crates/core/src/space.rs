//! Finite ultrametric spaces with exact distances.
//!
//! Distances are interned: the space keeps the sorted list of distinct
//! distance values plus an `n × n` matrix of `u32` ranks into that list.
//! Comparing ranks is the same as comparing the exact values, which keeps
//! every inner loop on plain integers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::{ParseScalarError, Scalar};

/// A sorted, duplicate-free set of point indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct PointSet(Vec<usize>);

impl PointSet {
    pub fn new(mut points: Vec<usize>) -> Self {
        points.sort_unstable();
        points.dedup();
        PointSet(points)
    }

    pub fn singleton(point: usize) -> Self {
        PointSet(vec![point])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.0.binary_search(&point).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut rest = other.0.iter();
        'outer: for x in &self.0 {
            for y in rest.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_strict_subset(&self, other: &PointSet) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    /// Image under a point map.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> PointSet {
        PointSet::new(self.0.iter().map(|&x| f(x)).collect())
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        PointSet::new(iter.into_iter().collect())
    }
}

/// Problems with the shape of the input, before any metric checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("a space needs at least one point")]
    Empty,
    #[error("point label {label:?} appears more than once")]
    DuplicateLabel { label: String },
    #[error("matrix is not {points}×{points}: {detail}")]
    NotSquare { points: usize, detail: String },
    #[error("entry ({row}, {col}) is not a nonnegative rational: {source}")]
    UnparsableEntry {
        row: usize,
        col: usize,
        #[source]
        source: ParseScalarError,
    },
}

impl InputError {
    /// Stable machine-readable code, one per error kind.
    pub fn code(&self) -> &'static str {
        match self {
            InputError::Empty => "empty-space",
            InputError::DuplicateLabel { .. } => "duplicate-label",
            InputError::NotSquare { .. } => "non-square-matrix",
            InputError::UnparsableEntry { .. } => "unparsable-entry",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Asymmetry {
    pub i: String,
    pub j: String,
    pub d_ij: Scalar,
    pub d_ji: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonzeroDiagonal {
    pub i: String,
    pub value: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroOffDiagonal {
    pub i: String,
    pub j: String,
}

/// `d(i, j) > max(d(i, k), d(k, j))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleViolation {
    pub i: String,
    pub k: String,
    pub j: String,
    pub d_ij: Scalar,
    pub d_ik: Scalar,
    pub d_kj: Scalar,
}

/// One witness per violated axiom, `None` where the axiom holds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub asymmetry: Option<Asymmetry>,
    pub nonzero_diagonal: Option<NonzeroDiagonal>,
    pub zero_off_diagonal: Option<ZeroOffDiagonal>,
    pub strong_triangle: Option<TriangleViolation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.asymmetry.is_none() && self.nonzero_diagonal.is_none() && self.zero_off_diagonal.is_none() && self.strong_triangle.is_none()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(a) = &self.asymmetry {
            writeln!(
                f,
                "asymmetric: d({}, {}) = {} but d({}, {}) = {}",
                a.i, a.j, a.d_ij, a.j, a.i, a.d_ji
            )?;
        }
        if let Some(z) = &self.nonzero_diagonal {
            writeln!(f, "nonzero diagonal: d({}, {}) = {}", z.i, z.i, z.value)?;
        }
        if let Some(z) = &self.zero_off_diagonal {
            writeln!(f, "distinct points at distance 0: {} and {}", z.i, z.j)?;
        }
        if let Some(t) = &self.strong_triangle {
            writeln!(
                f,
                "strong triangle inequality fails on ({}, {}, {}): d({}, {}) = {} > max({}, {})",
                t.i, t.k, t.j, t.i, t.j, t.d_ij, t.d_ik, t.d_kj
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("not an ultrametric:\n{0}")]
    Violations(Box<ValidationReport>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubspaceError {
    #[error("a subspace needs at least one point")]
    Empty,
    #[error("point index {0} is out of range")]
    OutOfRange(usize),
}

/// A validated finite ultrametric space. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltrametricSpace {
    points: Vec<String>,
    /// Distinct distances, ascending; `values[0]` is zero.
    values: Vec<Scalar>,
    ranks: Vec<u32>,
}

impl UltrametricSpace {
    /// Parse string entries and validate.
    pub fn parse<S: AsRef<str>>(points: Vec<String>, rows: &[Vec<S>]) -> Result<Self, ValidationError> {
        check_shape(&points, rows.len(), |r| rows[r].len())?;
        let mut matrix = Vec::with_capacity(rows.len());
        for (row, entries) in rows.iter().enumerate() {
            let parsed = entries
                .iter()
                .enumerate()
                .map(|(col, e)| {
                    e.as_ref()
                        .parse::<Scalar>()
                        .map_err(|source| InputError::UnparsableEntry { row, col, source })
                })
                .collect::<Result<Vec<_>, _>>()?;
            matrix.push(parsed);
        }
        Self::from_matrix(points, matrix)
    }

    /// Validate an exact matrix. Every violated axiom class is reported with
    /// one witness.
    pub fn from_matrix(points: Vec<String>, matrix: Vec<Vec<Scalar>>) -> Result<Self, ValidationError> {
        check_shape(&points, matrix.len(), |r| matrix[r].len())?;
        let n = points.len();

        let zero = Scalar::zero();
        let mut interned: BTreeMap<&Scalar, u32> = BTreeMap::new();
        for row in &matrix {
            for v in row {
                interned.insert(v, 0);
            }
        }
        interned.insert(&zero, 0);
        for (rank, slot) in interned.values_mut().enumerate() {
            *slot = rank as u32;
        }
        let ranks: Vec<u32> = matrix.iter().flatten().map(|v| interned[v]).collect();
        let values: Vec<Scalar> = interned.keys().map(|&v| v.clone()).collect();
        let r = |i: usize, j: usize| ranks[i * n + j];
        let label = |i: usize| points[i].clone();

        let nonzero_diagonal = (0..n).find(|&i| r(i, i) != 0).map(|i| NonzeroDiagonal {
            i: label(i),
            value: matrix[i][i].clone(),
        });
        let pairs = || (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)));
        let asymmetry = pairs().find(|&(i, j)| r(i, j) != r(j, i)).map(|(i, j)| Asymmetry {
            i: label(i),
            j: label(j),
            d_ij: matrix[i][j].clone(),
            d_ji: matrix[j][i].clone(),
        });
        let zero_off_diagonal = pairs()
            .find(|&(i, j)| r(i, j) == 0 || r(j, i) == 0)
            .map(|(i, j)| ZeroOffDiagonal { i: label(i), j: label(j) });
        // The triangle check reads the upper triangle as a symmetric matrix.
        let upper = |i: usize, j: usize| if i <= j { r(i, j) } else { r(j, i) };
        let strong_triangle = find_triangle_violation(n, upper).map(|(i, k, j)| TriangleViolation {
            i: label(i),
            k: label(k),
            j: label(j),
            d_ij: values[upper(i, j) as usize].clone(),
            d_ik: values[upper(i, k) as usize].clone(),
            d_kj: values[upper(k, j) as usize].clone(),
        });
        let report = ValidationReport {
            asymmetry,
            nonzero_diagonal,
            zero_off_diagonal,
            strong_triangle,
        };
        if !report.is_clean() {
            return Err(ValidationError::Violations(Box::new(report)));
        }
        Ok(UltrametricSpace { points, values, ranks })
    }

    /// Trusted constructor for spaces produced by construction (generator,
    /// restriction, transforms). `values` must be ascending and distinct.
    pub(crate) fn from_ranks(points: Vec<String>, values: Vec<Scalar>, ranks: Vec<u32>) -> Self {
        debug_assert_eq!(ranks.len(), points.len() * points.len());
        debug_assert!(values.windows(2).all(|w| w[0] < w[1]));
        UltrametricSpace { points, values, ranks }
    }

    /// Every pair of distinct points at distance `d` (`d > 0`).
    pub fn equilateral<S: Into<String>>(points: impl IntoIterator<Item = S>, d: Scalar) -> Self {
        assert!(!d.is_zero(), "equilateral distance must be positive");
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        let n = points.len();
        assert!(n > 0);
        let ranks = (0..n * n).map(|c| u32::from(c / n != c % n)).collect();
        let values = if n > 1 { vec![Scalar::zero(), d] } else { vec![Scalar::zero()] };
        Self::from_ranks(points, values, ranks)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn label(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }

    pub fn label_index(&self) -> HashMap<&str, usize> {
        self.points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect()
    }

    pub fn dist(&self, i: usize, j: usize) -> &Scalar {
        &self.values[self.rank(i, j) as usize]
    }

    /// Position of `dist(i, j)` among the distinct distances of the space.
    #[inline]
    pub fn rank(&self, i: usize, j: usize) -> u32 {
        self.ranks[i * self.len() + j]
    }

    /// Distinct distances, ascending (includes zero).
    pub fn distance_values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn value_of_rank(&self, rank: u32) -> &Scalar {
        &self.values[rank as usize]
    }

    pub fn to_matrix(&self) -> Vec<Vec<Scalar>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| self.dist(i, j).clone()).collect()).collect()
    }

    /// Distances from `t`, sorted and distinct. Always contains zero.
    pub fn spectrum(&self, t: usize) -> Vec<Scalar> {
        let ranks: BTreeSet<u32> = (0..self.len()).map(|x| self.rank(x, t)).collect();
        ranks.into_iter().map(|r| self.values[r as usize].clone()).collect()
    }

    /// Apply a strictly increasing map to the distance values. The map must
    /// send zero to zero; this is checked.
    pub fn map_distances(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let values: Vec<Scalar> = self.values.iter().map(f).collect();
        assert!(values[0].is_zero(), "distance transform must fix zero");
        assert!(
            values.windows(2).all(|w| w[0] < w[1]),
            "distance transform must be strictly increasing"
        );
        Self::from_ranks(self.points.clone(), values, self.ranks.clone())
    }

    /// Multiply every distance by a positive factor.
    pub fn scaled(&self, factor: &Scalar) -> Self {
        assert!(!factor.is_zero(), "scale factor must be positive");
        self.map_distances(|v| v.mul(factor))
    }

    pub fn relabeled(&self, points: Vec<String>) -> Result<Self, InputError> {
        check_shape(&points, self.len(), |_| self.len())?;
        Ok(Self::from_ranks(points, self.values.clone(), self.ranks.clone()))
    }

    /// The same metric with point `i` moved to position `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let n = self.len();
        assert_eq!(order.len(), n);
        let mut points = vec![String::new(); n];
        let mut ranks = vec![0; n * n];
        for i in 0..n {
            points[order[i]] = self.points[i].clone();
            for j in 0..n {
                ranks[order[i] * n + order[j]] = self.rank(i, j);
            }
        }
        Self::from_ranks(points, self.values.clone(), ranks)
    }

    /// The subspace on `members` as a standalone space, points renumbered in
    /// ascending index order.
    pub fn restrict(&self, members: &PointSet) -> Self {
        let idx = members.as_slice();
        let used: BTreeSet<u32> = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.rank(i, j))
            .collect();
        let remap: HashMap<u32, u32> = used.iter().enumerate().map(|(k, &r)| (r, k as u32)).collect();
        let values = used.iter().map(|&r| self.values[r as usize].clone()).collect();
        let ranks = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
            .map(|(i, j)| remap[&self.rank(i, j)])
            .collect();
        let points = idx.iter().map(|&i| self.points[i].clone()).collect();
        Self::from_ranks(points, values, ranks)
    }
}

fn check_shape(points: &[String], rows: usize, row_len: impl Fn(usize) -> usize) -> Result<(), InputError> {
    let n = points.len();
    if n == 0 && rows == 0 {
        return Err(InputError::Empty);
    }
    if rows != n {
        return Err(InputError::NotSquare {
            points: n,
            detail: format!("{rows} rows"),
        });
    }
    if let Some(r) = (0..rows).find(|&r| row_len(r) != n) {
        return Err(InputError::NotSquare {
            points: n,
            detail: format!("row {r} has {} entries", row_len(r)),
        });
    }
    let mut seen = BTreeSet::new();
    if let Some(dup) = points.iter().find(|p| !seen.insert(p.as_str())) {
        return Err(InputError::DuplicateLabel { label: dup.clone() });
    }
    Ok(())
}

/// Finds `(i, k, j)` with `d(i, j) > max(d(i, k), d(k, j))`, or `None` for an
/// ultrametric.
///
/// A symmetric matrix is ultrametric iff each entry is at most the minimax
/// path distance in a minimum spanning tree. That test is `O(n²)`; when it
/// fails for a pair, walking the tree path between the two points yields a
/// violating triple.
fn find_triangle_violation(n: usize, d: impl Fn(usize, usize) -> u32) -> Option<(usize, usize, usize)> {
    if n < 3 {
        return None;
    }
    let adjacency = minimum_spanning_tree(n, &d);
    let mut minimax = vec![0u32; n];
    let mut via = vec![usize::MAX; n];
    let mut stack = Vec::with_capacity(n);
    for i in 0..n {
        via.iter_mut().for_each(|v| *v = usize::MAX);
        via[i] = i;
        minimax[i] = 0;
        stack.push(i);
        while let Some(u) = stack.pop() {
            for &(w, weight) in &adjacency[u] {
                if via[w] == usize::MAX {
                    via[w] = u;
                    minimax[w] = minimax[u].max(weight);
                    stack.push(w);
                }
            }
        }
        let Some(j) = (i + 1..n).find(|&j| d(i, j) > minimax[j]) else {
            continue;
        };
        let bound = minimax[j];
        let mut path = vec![j];
        while *path.last().unwrap() != i {
            path.push(via[*path.last().unwrap()]);
        }
        path.reverse();
        let t = (1..path.len()).find(|&t| d(i, path[t]) > bound).expect("path ends above the bound");
        return Some((i, path[t - 1], path[t]));
    }
    None
}

/// Prim's algorithm on a dense symmetric weight function. Returns adjacency
/// lists of the tree with edge weights.
pub(crate) fn minimum_spanning_tree(n: usize, d: impl Fn(usize, usize) -> u32) -> Vec<Vec<(usize, u32)>> {
    let mut adjacency = vec![Vec::new(); n];
    if n == 0 {
        return adjacency;
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![u32::MAX; n];
    let mut from = vec![0usize; n];
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let mut next = usize::MAX;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let w = d(current, v);
            if w < best[v] {
                best[v] = w;
                from[v] = current;
            }
            if next == usize::MAX || best[v] < best[next] {
                next = v;
            }
        }
        in_tree[next] = true;
        adjacency[next].push((from[next], best[next]));
        adjacency[from[next]].push((next, best[next]));
        current = next;
    }
    adjacency
}

/// A nonempty subset of a space's points with the restricted metric.
#[derive(Debug, Clone, Copy)]
pub struct Subspace<'a> {
    space: &'a UltrametricSpace,
    members: &'a [usize],
}

impl<'a> Subspace<'a> {
    pub fn new(space: &'a UltrametricSpace, members: &'a PointSet) -> Result<Self, SubspaceError> {
        if members.is_empty() {
            return Err(SubspaceError::Empty);
        }
        if let Some(&bad) = members.as_slice().iter().find(|&&i| i >= space.len()) {
            return Err(SubspaceError::OutOfRange(bad));
        }
        Ok(Subspace {
            space,
            members: members.as_slice(),
        })
    }

    pub fn space(&self) -> &'a UltrametricSpace {
        self.space
    }

    pub fn members(&self) -> &'a [usize] {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub(crate) fn diameter_rank(&self) -> u32 {
        let m = self.members;
        m.iter()
            .enumerate()
            .flat_map(|(a, &i)| m[a + 1..].iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.space.rank(i, j))
            .max()
            .unwrap_or(0)
    }
}

/// Largest pairwise distance among the members; zero for a single point.
pub fn diameter(s: &Subspace<'_>) -> Scalar {
    s.space.value_of_rank(s.diameter_rank()).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn abc() -> UltrametricSpace {
        UltrametricSpace::parse(
            labels(&["a", "b", "c"]),
            &[vec!["0", "1", "2"], vec!["1", "0", "2"], vec!["2", "2", "0"]],
        )
        .unwrap()
    }

    /// Direct check of all n³ triples.
    fn brute_force_is_ultrametric(m: &[Vec<u32>]) -> bool {
        let n = m.len();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| m[i][j] <= m[i][k].max(m[k][j]))))
    }

    #[test]
    fn three_point_example_is_valid() {
        let s = abc();
        let m: Vec<Vec<u32>> = (0..3).map(|i| (0..3).map(|j| s.rank(i, j)).collect()).collect();
        assert!(brute_force_is_ultrametric(&m));
        assert_eq!(
            diameter(&Subspace::new(&s, &PointSet::new(vec![0, 1, 2])).unwrap()),
            Scalar::from_integer(2)
        );
        assert_eq!(
            diameter(&Subspace::new(&s, &PointSet::new(vec![0, 1])).unwrap()),
            Scalar::from_integer(1)
        );
        assert_eq!(diameter(&Subspace::new(&s, &PointSet::singleton(0)).unwrap()), Scalar::zero());
        assert_eq!(
            s.spectrum(0),
            vec![Scalar::zero(), Scalar::from_integer(1), Scalar::from_integer(2)]
        );
    }

    #[test]
    fn singleton_space() {
        let s = UltrametricSpace::parse(labels(&["a"]), &[vec!["0"]]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.spectrum(0), vec![Scalar::zero()]);
    }

    #[test]
    fn equilateral_spectrum() {
        let s = UltrametricSpace::equilateral(["a", "b", "c"], Scalar::from_integer(5));
        for t in 0..3 {
            assert_eq!(s.spectrum(t), vec![Scalar::zero(), Scalar::from_integer(5)]);
        }
    }

    #[test]
    fn triangle_violation_names_the_triple() {
        let err = UltrametricSpace::parse(
            labels(&["a", "b", "c"]),
            &[vec!["0", "1", "3"], vec!["1", "0", "1"], vec!["3", "1", "0"]],
        )
        .unwrap_err();
        let ValidationError::Violations(report) = err else {
            panic!("{err:?}")
        };
        let t = report.strong_triangle.unwrap();
        assert_eq!((t.i.as_str(), t.k.as_str(), t.j.as_str()), ("a", "b", "c"));
        assert_eq!(t.d_ij, Scalar::from_integer(3));
        assert_eq!(t.d_ik, Scalar::from_integer(1));
        assert_eq!(t.d_kj, Scalar::from_integer(1));
        assert!(report.asymmetry.is_none() && report.zero_off_diagonal.is_none());
    }

    #[test]
    fn every_violation_class_is_reported() {
        let err = UltrametricSpace::parse(
            labels(&["a", "b", "c", "d"]),
            &[
                vec!["1", "1", "3", "0"],
                vec!["2", "0", "1", "5"],
                vec!["3", "1", "0", "5"],
                vec!["0", "5", "5", "0"],
            ],
        )
        .unwrap_err();
        let ValidationError::Violations(r) = err else { panic!() };
        assert_eq!(r.nonzero_diagonal.unwrap().i, "a");
        let asym = r.asymmetry.unwrap();
        assert_eq!((asym.i.as_str(), asym.j.as_str()), ("a", "b"));
        let zero = r.zero_off_diagonal.unwrap();
        assert_eq!((zero.i.as_str(), zero.j.as_str()), ("a", "d"));
        assert!(r.strong_triangle.is_some());
    }

    #[test]
    fn input_errors_have_distinct_codes() {
        let dup = UltrametricSpace::parse(labels(&["a", "a"]), &[vec!["0", "1"], vec!["1", "0"]]).unwrap_err();
        let square = UltrametricSpace::parse(labels(&["a", "b"]), &[vec!["0", "1"], vec!["1"]]).unwrap_err();
        let rows = UltrametricSpace::parse(labels(&["a", "b"]), &[vec!["0", "1"]]).unwrap_err();
        let parse = UltrametricSpace::parse(labels(&["a", "b"]), &[vec!["0", "x"], vec!["1", "0"]]).unwrap_err();
        let codes: Vec<&str> = [dup, square, rows, parse]
            .iter()
            .map(|e| match e {
                ValidationError::Input(i) => i.code(),
                other => panic!("{other:?}"),
            })
            .collect();
        assert_eq!(
            codes,
            ["duplicate-label", "non-square-matrix", "non-square-matrix", "unparsable-entry"]
        );
        let empty = UltrametricSpace::parse::<&str>(vec![], &[]).unwrap_err();
        assert_eq!(empty, ValidationError::Input(InputError::Empty));
    }

    #[test]
    fn restriction_and_transforms() {
        let s = abc();
        let sub = s.restrict(&PointSet::new(vec![0, 2]));
        assert_eq!(sub.points(), &labels(&["a", "c"])[..]);
        assert_eq!(sub.dist(0, 1), &Scalar::from_integer(2));
        assert_eq!(sub.distance_values().len(), 2);

        let scaled = s.scaled(&Scalar::from_integer(3));
        assert_eq!(scaled.dist(0, 2), &Scalar::from_integer(6));
        let moved = s.permuted(&[2, 0, 1]);
        assert_eq!(moved.label(2), "a");
        assert_eq!(moved.dist(2, 0), &Scalar::from_integer(1));
    }

    #[test]
    fn point_set_subsets() {
        let a = PointSet::new(vec![3, 1]);
        let b = PointSet::new(vec![1, 2, 3]);
        assert!(a.is_subset(&b) && a.is_strict_subset(&b));
        assert!(!b.is_subset(&a));
        assert!(!PointSet::new(vec![0, 4]).is_subset(&b));
        assert!(b.is_subset(&b) && !b.is_strict_subset(&b));
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn triangle_check_matches_brute_force(n in 1usize..7, raw in proptest::collection::vec(1u32..4, 36)) {
            let m: Vec<Vec<u32>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { 0 } else { raw[i.min(j) * 6 + i.max(j)] }).collect())
                .collect();
            let found = find_triangle_violation(n, |i, j| m[i][j]);
            prop_assert_eq!(found.is_none(), brute_force_is_ultrametric(&m));
            if let Some((i, k, j)) = found {
                prop_assert!(m[i][j] > m[i][k].max(m[k][j]));
            }
        }
    }
}
