use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::maps::MapDescriptor;
use crate::numeric::{ser_nat, Nat};

use super::{classify, decompose, ChainError, ChainHeadForm, NodeClass};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    #[serde(serialize_with = "ser_nat")]
    pub value: Nat,
    pub depth: usize,
    /// Index of the parent in [`PreimageTree::nodes`].
    pub parent: Option<usize>,
    /// Indices of the children, ascending by value.
    pub children: Vec<usize>,
    /// Set on a node whose value already appeared earlier in the tree (the
    /// root lies on a cycle); such nodes are not expanded again.
    pub repeat: bool,
    /// Collatz-only annotations.
    pub class: Option<NodeClass>,
    pub form: Option<ChainHeadForm>,
}

/// Truncated inverse-image tree: the children of a node are exactly its
/// preimages under the map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreimageTree {
    pub map: String,
    #[serde(serialize_with = "ser_nat")]
    pub root: Nat,
    pub depth: usize,
    pub nodes: Vec<TreeNode>,
}

pub fn build_preimage_tree(
    map: &MapDescriptor,
    root: &Nat,
    depth: usize,
) -> Result<PreimageTree, ChainError> {
    if *root == Nat::default() {
        return Err(ChainError::DomainError);
    }
    let annotate = map.is_collatz();
    let make = |value: Nat, depth: usize, parent: Option<usize>, repeat: bool| {
        let (class, form) = if annotate {
            let class = classify(&value);
            (Some(class), decompose(&value).ok())
        } else {
            (None, None)
        };
        TreeNode {
            value,
            depth,
            parent,
            children: Vec::new(),
            repeat,
            class,
            form,
        }
    };
    let mut nodes = vec![make(root.clone(), 0, None, false)];
    let mut first_seen: HashMap<Nat, usize> = HashMap::from([(root.clone(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if nodes[i].depth == depth || nodes[i].repeat {
            continue;
        }
        for child in map.preimage(&nodes[i].value) {
            let idx = nodes.len();
            let repeat = first_seen.contains_key(&child);
            first_seen.entry(child.clone()).or_insert(idx);
            nodes.push(make(child, nodes[i].depth + 1, Some(i), repeat));
            nodes[i].children.push(idx);
            queue.push_back(idx);
        }
    }
    Ok(PreimageTree {
        map: map.to_string(),
        root: root.clone(),
        depth,
        nodes,
    })
}

impl PreimageTree {
    pub fn children_of(&self, index: usize) -> Vec<&Nat> {
        self.nodes[index]
            .children
            .iter()
            .map(|&c| &self.nodes[c].value)
            .collect()
    }

    pub fn level(&self, depth: usize) -> Vec<&Nat> {
        let mut out: Vec<&Nat> = self
            .nodes
            .iter()
            .filter(|n| n.depth == depth)
            .map(|n| &n.value)
            .collect();
        out.sort();
        out
    }
}
