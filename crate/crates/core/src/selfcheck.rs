//! Seeded self-check suite: every invariant of the library is run against a
//! generated corpus and an independent oracle where one exists.
//!
//! Case `i` owns space `s_i`. Single-space checks run on `s_i`; pair checks
//! compare `s_i` with `s_{i+1}` (wrapping) and with a disguised copy of
//! `s_i` whose distances went through `v ↦ v² + v` and whose points were
//! shuffled. Cases run independently and the report lists checks in a
//! fixed order, so the outcome does not depend on the execution mode.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ballean::{ballean_from_tree, check_ball_transitivity, check_cover_criterion, enumerate_ballean, hasse, tree_digraph, Sampling};
use crate::ballmap::{
    brute_force_exists_with, exists_ball_preserving_bijection, is_ball_preserving, posets_isomorphic_iff_ballmap, DEFAULT_BRUTE_FORCE_CAP,
};
use crate::exec::{self, Execution};
use crate::generate::{generate_random, GenConfig};
use crate::isomorphism::{
    brute_force_tree_iso, poset_isomorphism, tree_isomorphism, verify_digraph_bijection, verify_tree_bijection, DEFAULT_TREE_CAP,
};
use crate::reptree::{build_rep_tree, distance_from_tree, strip_labels, NodeKind, RepTree};
use crate::space::UltrametricSpace;
use crate::tree::{gamma_all, RootedTree};

/// Check names in report order.
pub const CHECKS: [&str; 9] = [
    "distance-roundtrip",
    "tree-structure",
    "ball-count",
    "hasse-tree-agreement",
    "ball-transitivity",
    "cover-criterion",
    "tree-iso-oracle",
    "ballmap-oracle-agreement",
    "poset-ballmap-consistency",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelfcheckConfig {
    pub seed: u64,
    pub count: usize,
    /// Largest space in the corpus, at least 1.
    pub max_n: usize,
    pub exec: Execution,
}

impl SelfcheckConfig {
    pub fn new(seed: u64, count: usize, max_n: usize) -> Self {
        SelfcheckConfig {
            seed,
            count,
            max_n,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Inputs beyond an oracle's size cap.
    pub skipped: usize,
    /// Case index and description of the first failure.
    pub first_failure: Option<(usize, String)>,
}

impl CheckSummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfcheckReport {
    pub seed: u64,
    pub count: usize,
    pub max_n: usize,
    pub checks: Vec<CheckSummary>,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckSummary::ok)
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SelfcheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "selfcheck seed {} count {} max-n {}", self.seed, self.count, self.max_n)?;
        for c in &self.checks {
            let status = if c.ok() { "PASS" } else { "FAIL" };
            write!(
                f,
                "  {status} {:<26} passed {:>5}  failed {:>3}  skipped {:>4}",
                c.name, c.passed, c.failed, c.skipped
            )?;
            if let Some((case, why)) = &c.first_failure {
                write!(f, "  first failure: case {case}: {why}")?;
            }
            writeln!(f)?;
        }
        write!(f, "{}", if self.passed() { "all checks passed" } else { "some checks failed" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail(String),
    Skip,
}

fn outcome(ok: bool, why: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(why())
    }
}

fn case_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (i as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

/// Corpus space `i`: size, depth bound and label pool all vary with the seed.
pub fn corpus_space(seed: u64, i: usize, max_n: usize) -> UltrametricSpace {
    let s = case_seed(seed, i);
    let mut rng = ChaCha8Rng::seed_from_u64(s);
    let cfg = GenConfig {
        seed: s,
        n: rng.gen_range(1..=max_n.max(1)),
        depth_bound: rng.gen_range(1..=6),
        label_pool: rng.gen_range(1..=3),
    };
    generate_random(&cfg)
}

/// Same ball structure, different distances and point order.
pub fn disguise(s: &UltrametricSpace, seed: u64) -> UltrametricSpace {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    s.map_distances(|v| v.mul(v).add(v)).permuted(&order)
}

fn distance_roundtrip(s: &UltrametricSpace, t: &RepTree) -> Outcome {
    let n = s.len();
    for x in 0..n {
        for y in 0..n {
            match distance_from_tree(t, x, y) {
                Ok(d) if &d == s.dist(x, y) => {}
                Ok(d) => {
                    return Outcome::Fail(format!(
                        "d({}, {}) = {} but the tree gives {d}",
                        s.label(x),
                        s.label(y),
                        s.dist(x, y)
                    ))
                }
                Err(e) => return Outcome::Fail(e.to_string()),
            }
        }
    }
    Outcome::Pass
}

fn tree_structure(t: &RepTree) -> Outcome {
    for (v, node) in t.nodes().iter().enumerate() {
        let NodeKind::Internal(label) = &node.kind else { continue };
        if node.children.len() < 2 {
            return Outcome::Fail(format!("node {v} has {} children", node.children.len()));
        }
        if let Some(&c) = node.children.iter().find(|&&c| t.label(c).is_some_and(|l| l >= label)) {
            return Outcome::Fail(format!("child {c} of node {v} is not below label {label}"));
        }
    }
    Outcome::Pass
}

fn ball_count(s: &UltrametricSpace, t: &RepTree) -> Outcome {
    let from_space = enumerate_ballean(s);
    let from_tree = ballean_from_tree(t);
    outcome(from_space.len() == t.node_count() && from_space == from_tree, || {
        format!(
            "{} balls, {} nodes, families equal: {}",
            from_space.len(),
            t.node_count(),
            from_space == from_tree
        )
    })
}

fn hasse_tree_agreement(s: &UltrametricSpace, t: &RepTree) -> Outcome {
    let balls = enumerate_ballean(s);
    let h = hasse(&balls);
    let ball_of: Option<Vec<usize>> = gamma_all(t).iter().map(|g| balls.id_of(g)).collect();
    let Some(ball_of) = ball_of else {
        return Outcome::Fail("a node's leaf set is not a ball".into());
    };
    let td = tree_digraph(t);
    let mut relabeled: Vec<(usize, usize)> = td.arcs().iter().map(|&(u, v)| (ball_of[u], ball_of[v])).collect();
    relabeled.sort_unstable();
    if relabeled != h.arcs() {
        return Outcome::Fail("cover arcs differ from tree arcs under the leaf-set labelling".into());
    }
    match poset_isomorphism(&h, &td) {
        Ok(Some(f)) if verify_digraph_bijection(&h, &td, &f) => Outcome::Pass,
        Ok(Some(_)) => Outcome::Fail("poset witness failed verification".into()),
        Ok(None) => Outcome::Fail("digraphs reported non-isomorphic".into()),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn ball_transitivity(s: &UltrametricSpace, seed: u64) -> Outcome {
    let report = check_ball_transitivity(
        s,
        Sampling {
            seed,
            ..Sampling::default()
        },
    );
    outcome(report.passed(), || format!("{:?}", report.failure))
}

fn cover_criterion(t: &RepTree) -> Outcome {
    match check_cover_criterion(t) {
        Ok(()) => Outcome::Pass,
        Err((u, v)) => Outcome::Fail(format!("criterion and parent relation disagree on ({u}, {v})")),
    }
}

fn tree_iso_oracle(a: &RepTree, b: &RepTree) -> Outcome {
    let (ua, ub) = (strip_labels(a), strip_labels(b));
    let oracle = match brute_force_tree_iso(&ua, &ub, DEFAULT_TREE_CAP) {
        Ok(found) => found.is_some(),
        Err(_) => return Outcome::Skip,
    };
    let fast = tree_isomorphism(&ua, &ub);
    if fast.is_some() != oracle {
        return Outcome::Fail(format!("canonical forms say {}, backtracking says {oracle}", fast.is_some()));
    }
    outcome(fast.is_none_or(|f| verify_tree_bijection(&ua, &ub, &f)), || {
        "witness failed verification".into()
    })
}

fn ballmap_oracle(sx: &UltrametricSpace, sy: &UltrametricSpace, expect_equivalent: bool) -> Outcome {
    let fast = exists_ball_preserving_bijection(sx, sy);
    if expect_equivalent && !fast.equivalent {
        return Outcome::Fail("disguised copy reported not equivalent".into());
    }
    if let Some(w) = &fast.witness {
        if !is_ball_preserving(w, sx, sy).is_ok_and(|p| p.is_preserving()) {
            return Outcome::Fail("tree witness does not preserve balls".into());
        }
    }
    let oracle = match brute_force_exists_with(sx, sy, DEFAULT_BRUTE_FORCE_CAP, Execution::Sequential) {
        Ok(d) => d,
        Err(_) => return Outcome::Skip,
    };
    outcome(oracle.equivalent == fast.equivalent, || {
        format!("tree route says {}, exhaustive search says {}", fast.equivalent, oracle.equivalent)
    })
}

fn consistency(sx: &UltrametricSpace, sy: &UltrametricSpace) -> Outcome {
    let report = posets_isomorphic_iff_ballmap(sx, sy);
    outcome(report.consistent(), || report.to_string())
}

/// Outcomes of one case, one or more per check, in [`CHECKS`] order.
fn run_case(cfg: &SelfcheckConfig, corpus: &[UltrametricSpace], trees: &[RepTree], i: usize) -> Vec<Vec<Outcome>> {
    let s = &corpus[i];
    let t = &trees[i];
    let j = (i + 1) % corpus.len();
    let seed = case_seed(cfg.seed, i);
    let copy = disguise(s, seed);
    let copy_tree = build_rep_tree(&copy);
    vec![
        vec![distance_roundtrip(s, t)],
        vec![tree_structure(t)],
        vec![ball_count(s, t)],
        vec![hasse_tree_agreement(s, t)],
        vec![ball_transitivity(s, seed)],
        vec![cover_criterion(t)],
        vec![tree_iso_oracle(t, &trees[j]), tree_iso_oracle(t, &copy_tree)],
        vec![ballmap_oracle(s, &corpus[j], false), ballmap_oracle(s, &copy, true)],
        vec![consistency(s, &corpus[j]), consistency(s, &copy)],
    ]
}

pub fn run_selfcheck(cfg: &SelfcheckConfig) -> SelfcheckReport {
    let corpus = exec::map_range(cfg.exec, cfg.count, |i| corpus_space(cfg.seed, i, cfg.max_n));
    let trees = exec::map_range(cfg.exec, cfg.count, |i| build_rep_tree(&corpus[i]));
    let cases = exec::map_range(cfg.exec, cfg.count, |i| run_case(cfg, &corpus, &trees, i));

    let mut checks: Vec<CheckSummary> = CHECKS
        .iter()
        .map(|&name| CheckSummary {
            name,
            passed: 0,
            failed: 0,
            skipped: 0,
            first_failure: None,
        })
        .collect();
    for (i, case) in cases.into_iter().enumerate() {
        for (summary, outcomes) in checks.iter_mut().zip(case) {
            for o in outcomes {
                match o {
                    Outcome::Pass => summary.passed += 1,
                    Outcome::Skip => summary.skipped += 1,
                    Outcome::Fail(why) => {
                        summary.failed += 1;
                        summary.first_failure.get_or_insert((i, why));
                    }
                }
            }
        }
    }
    SelfcheckReport {
        seed: cfg.seed,
        count: cfg.count,
        max_n: cfg.max_n,
        checks,
    }
}
