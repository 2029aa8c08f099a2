use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::numeric::Nat;

use super::{classify, decompose, Chain, PreimageTree};

fn label(n: &Nat) -> String {
    match decompose(n) {
        Ok(form) => format!("{n} (N2, {form})"),
        Err(_) => format!("{n} ({})", classify(n)),
    }
}

/// Inverse-image tree as a DOT digraph, edges pointing from a node to its
/// image. Repeated values get their own vertex so the tree shape survives.
pub fn tree_to_dot(tree: &PreimageTree) -> String {
    let annotate = tree.nodes.first().is_some_and(|n| n.class.is_some());
    let mut out = String::new();
    writeln!(out, "digraph preimage_tree {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=box];").unwrap();
    for (i, node) in tree.nodes.iter().enumerate() {
        let text = if annotate {
            label(&node.value)
        } else {
            node.value.to_string()
        };
        let style = if node.repeat { ", style=dashed" } else { "" };
        writeln!(out, "  v{i} [label=\"{text}\"{style}];").unwrap();
    }
    for (i, node) in tree.nodes.iter().enumerate() {
        if let Some(parent) = node.parent {
            writeln!(out, "  v{i} -> v{parent};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// A chain as a DOT digraph along the Collatz map: one cluster per family,
/// link nodes and lead-in points outside the clusters.
pub fn chain_to_dot(chain: &Chain) -> String {
    let mut out = String::new();
    let mut drawn: BTreeSet<&Nat> = BTreeSet::new();
    writeln!(out, "digraph chain {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=box];").unwrap();
    for (i, family) in chain.families.iter().enumerate() {
        writeln!(out, "  subgraph cluster_{i} {{").unwrap();
        writeln!(out, "    label=\"family a={}, h={}\";", family.a, family.h).unwrap();
        for m in &family.members {
            if drawn.insert(m) {
                writeln!(out, "    \"{m}\" [label=\"{}\"];", label(m)).unwrap();
            }
        }
        out.push_str("  }\n");
    }
    let mut edges: Vec<(Nat, Nat)> = Vec::new();
    let mut path = |seq: &[&Nat]| {
        for w in seq.windows(2) {
            edges.push((w[0].clone(), w[1].clone()));
        }
    };
    let lead: Vec<&Nat> = chain
        .lead_in
        .iter()
        .chain(chain.families.get(chain.origin).map(|f| &f.members[0]))
        .collect();
    path(&lead);
    for family in &chain.families {
        path(&family.members.iter().collect::<Vec<_>>());
    }
    let entries: Vec<_> = chain
        .links
        .iter()
        .chain(chain.closing_link.as_ref())
        .collect();
    for link in &entries {
        // the orbit from the link node to the next family
        let mut seq = vec![&link.tail, &link.link];
        if link.entry != link.link {
            seq.push(&link.entry);
        }
        path(&seq);
    }
    for n in chain.lead_in.iter().chain(entries.iter().map(|l| &l.link)) {
        if drawn.insert(n) {
            writeln!(out, "  \"{n}\" [label=\"{}\", style=rounded];", label(n)).unwrap();
        }
    }
    let mut seen = BTreeSet::new();
    for (a, b) in edges {
        if a != b && seen.insert((a.clone(), b.clone())) {
            writeln!(out, "  \"{a}\" -> \"{b}\";").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
