use std::collections::HashMap;

use crate::maps::MapDescriptor;
use crate::numeric::Nat;
use crate::trajectory::CycleInfo;

use super::MeasureError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestNode {
    /// Index of the owning cycle in [`PreimageForest::cycles`].
    pub cycle: usize,
    pub level: usize,
    /// Image under the map; `None` for cycle members.
    pub parent: Option<Nat>,
    /// Tree children in ascending order. Empty for nodes on the last level.
    pub children: Vec<Nat>,
}

/// Backward orbits of a set of cycles, truncated at `depth` levels.
///
/// Level 0 of tree `i` holds the members of cycle `i`; level `ℓ` holds the
/// preimages of level `ℓ − 1` that are not cycle members. Trees of distinct
/// cycles never share a node since the map is single-valued forward.
#[derive(Debug, Clone)]
pub struct PreimageForest {
    map: MapDescriptor,
    cycles: Vec<CycleInfo>,
    depth: usize,
    levels: Vec<Vec<Vec<Nat>>>,
    nodes: HashMap<Nat, ForestNode>,
}

/// Breadth-first construction; every level is sorted ascending.
pub fn build_forest(
    map: &MapDescriptor,
    cycles: &[CycleInfo],
    depth: usize,
) -> Result<PreimageForest, MeasureError> {
    let mut nodes: HashMap<Nat, ForestNode> = HashMap::new();
    for (i, c) in cycles.iter().enumerate() {
        if !c.verify(map) {
            return Err(MeasureError::InvalidCycle { index: i });
        }
        for m in c.members() {
            let node = ForestNode {
                cycle: i,
                level: 0,
                parent: None,
                children: Vec::new(),
            };
            if let Some(prev) = nodes.insert(m.clone(), node) {
                return Err(MeasureError::OverlappingCycles {
                    first: prev.cycle,
                    second: i,
                    shared: m.clone(),
                });
            }
        }
    }
    let mut levels = Vec::with_capacity(cycles.len());
    for (i, c) in cycles.iter().enumerate() {
        let mut tree: Vec<Vec<Nat>> = Vec::with_capacity(depth + 1);
        let mut base = c.members().to_vec();
        base.sort();
        tree.push(base);
        for level in 1..=depth {
            let mut next = Vec::new();
            for parent in &tree[level - 1] {
                let mut children: Vec<Nat> = map
                    .preimage(parent)
                    .into_iter()
                    .filter(|x| !c.contains(x))
                    .collect();
                children.sort();
                for child in &children {
                    let node = ForestNode {
                        cycle: i,
                        level,
                        parent: Some(parent.clone()),
                        children: Vec::new(),
                    };
                    let clash = nodes.insert(child.clone(), node);
                    assert!(
                        clash.is_none(),
                        "preimage trees of distinct cycles overlap at {child}"
                    );
                }
                next.extend(children.iter().cloned());
                nodes.get_mut(parent).unwrap().children = children;
            }
            next.sort();
            tree.push(next);
        }
        levels.push(tree);
    }
    Ok(PreimageForest {
        map: map.clone(),
        cycles: cycles.to_vec(),
        depth,
        levels,
        nodes,
    })
}

impl PreimageForest {
    pub fn map(&self) -> &MapDescriptor {
        &self.map
    }

    pub fn cycles(&self) -> &[CycleInfo] {
        &self.cycles
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `level(cycle, ℓ)`, ascending. Empty past the forest depth.
    pub fn level(&self, cycle: usize, level: usize) -> &[Nat] {
        self.levels[cycle].get(level).map_or(&[], Vec::as_slice)
    }

    pub fn node(&self, n: &Nat) -> Option<&ForestNode> {
        self.nodes.get(n)
    }

    pub fn is_covered(&self, n: &Nat) -> bool {
        self.nodes.contains_key(n)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Covered nodes ordered by (cycle, level, value).
    pub fn covered(&self) -> impl Iterator<Item = &Nat> {
        self.levels.iter().flatten().flatten()
    }

    /// `T^{-1}(n)` restricted to covered nodes.
    pub fn covered_preimage(&self, n: &Nat) -> Vec<Nat> {
        let Some(node) = self.nodes.get(n) else {
            return Vec::new();
        };
        let mut out = node.children.clone();
        if node.level == 0 {
            let members = self.cycles[node.cycle].members();
            let pos = members.iter().position(|m| m == n).unwrap();
            let pred = &members[(pos + members.len() - 1) % members.len()];
            out.push(pred.clone());
        }
        out.sort();
        out
    }
}
