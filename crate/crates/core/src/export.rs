//! Tree and ballean exports: JSON, Graphviz DOT and Newick.

use serde::Serialize;

use crate::ballean::{hasse, Ballean};
use crate::reptree::{NodeKind, RepTree};
use crate::space::UltrametricSpace;
use crate::tree::{NodeId, RootedTree};

#[derive(Debug, Serialize)]
struct JsonNode<'a> {
    id: NodeId,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<&'a str>,
    children: &'a [NodeId],
}

#[derive(Debug, Serialize)]
struct JsonTree<'a> {
    root: NodeId,
    nodes: Vec<JsonNode<'a>>,
}

/// `{"root": 0, "nodes": [{"id", "label" | "point", "children"}]}`.
pub fn tree_to_json(t: &RepTree, s: &UltrametricSpace) -> String {
    let nodes = t
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, node)| match &node.kind {
            NodeKind::Internal(label) => JsonNode {
                id,
                label: Some(label.to_string()),
                point: None,
                children: &node.children,
            },
            NodeKind::Leaf(p) => JsonNode {
                id,
                label: None,
                point: Some(s.label(*p)),
                children: &node.children,
            },
        })
        .collect();
    serde_json::to_string_pretty(&JsonTree { root: t.root(), nodes }).expect("plain data serializes")
}

fn dot_quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Internal nodes show their diameter, leaves show their point name.
pub fn tree_to_dot(t: &RepTree, s: &UltrametricSpace) -> String {
    let mut out = String::from("digraph reptree {\n");
    for (id, node) in t.nodes().iter().enumerate() {
        match &node.kind {
            NodeKind::Internal(label) => out.push_str(&format!("  n{id} [label={}, shape=ellipse];\n", dot_quote(&label.to_string()))),
            NodeKind::Leaf(p) => out.push_str(&format!("  n{id} [label={}, shape=box];\n", dot_quote(s.label(*p)))),
        }
    }
    for (id, node) in t.nodes().iter().enumerate() {
        for c in &node.children {
            out.push_str(&format!("  n{id} -> n{c};\n"));
        }
    }
    out.push_str("}\n");
    out
}

fn newick_name(text: &str) -> String {
    let plain = !text.is_empty() && text.chars().all(|c| !c.is_whitespace() && !"()[]':;,".contains(c));
    if plain {
        text.to_string()
    } else {
        format!("'{}'", text.replace('\'', "''"))
    }
}

/// Leaves are named by point, internal nodes carry their diameter as the
/// node label: `(d,(c,(a,b)1)2)3;`.
pub fn tree_to_newick(t: &RepTree, s: &UltrametricSpace) -> String {
    enum Step {
        Open(NodeId),
        Sep,
        Close(NodeId),
    }
    let mut out = String::new();
    let mut stack = vec![Step::Open(t.root())];
    while let Some(step) = stack.pop() {
        match step {
            Step::Open(v) => match &t.nodes()[v].kind {
                NodeKind::Leaf(p) => out.push_str(&newick_name(s.label(*p))),
                NodeKind::Internal(_) => {
                    out.push('(');
                    stack.push(Step::Close(v));
                    for (i, &c) in t.children(v).iter().enumerate().rev() {
                        stack.push(Step::Open(c));
                        if i > 0 {
                            stack.push(Step::Sep);
                        }
                    }
                }
            },
            Step::Sep => out.push(','),
            Step::Close(v) => {
                out.push(')');
                out.push_str(&newick_name(&t.label(v).expect("internal").to_string()));
            }
        }
    }
    out.push(';');
    out
}

#[derive(Debug, Serialize)]
struct JsonBall {
    members: Vec<String>,
    radius: String,
}

#[derive(Debug, Serialize)]
struct JsonBallean {
    balls: Vec<JsonBall>,
    /// `[lower, upper]` ball indices of each cover.
    arcs: Vec<(usize, usize)>,
}

fn member_labels(b: &crate::space::PointSet, s: &UltrametricSpace) -> Vec<String> {
    b.iter().map(|p| s.label(p).to_string()).collect()
}

pub fn ballean_to_json(b: &Ballean, s: &UltrametricSpace) -> String {
    let doc = JsonBallean {
        balls: b
            .balls()
            .iter()
            .map(|ball| JsonBall {
                members: member_labels(&ball.members, s),
                radius: ball.radius.to_string(),
            })
            .collect(),
        arcs: hasse(b).arcs().to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

/// One line per ball, then one line per cover arc.
pub fn ballean_to_text(b: &Ballean, s: &UltrametricSpace) -> String {
    let show = |i: usize| format!("{{{}}}", member_labels(&b.balls()[i].members, s).join(", "));
    let mut out = format!("{} balls\n", b.len());
    for (i, ball) in b.balls().iter().enumerate() {
        out.push_str(&format!("  [{i}] {}  radius {}\n", show(i), ball.radius));
    }
    let h = hasse(b);
    out.push_str(&format!("{} covers\n", h.arcs().len()));
    for &(u, v) in h.arcs() {
        out.push_str(&format!("  {} -> {}\n", show(u), show(v)));
    }
    out
}
