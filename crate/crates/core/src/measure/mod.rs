//! A finite measure on the truncated backward orbits of the cycles of a map,
//! under which the map is power-bounded with constant 2.
//!
//! Construction, per cycle `C_i` of length `N`:
//!
//! * every cycle member gets `1/(2N)`, so the cycle carries `1/2`;
//! * the first preimage level outside the cycle, enumerated ascending as
//!   `j = 1, 2, …`, gets `2^(−j−3)`;
//! * on deeper levels, the `t`-th child (ascending) of a node with value `m`
//!   gets `m · 2^(−t−1)`, so a node's children carry at most half its value.
//!
//! The per-cycle measures `μ_i` are combined as `μ = Σ_i 2^(−i−1) μ_i`
//! (cycles indexed from 1). Nodes outside the forest get 0.

mod forest;
mod power_bound;
mod value;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::numeric::{ser_nat, ser_opt_nat, DyadicRational, Nat};

pub use forest::{build_forest, ForestNode, PreimageForest};
pub use power_bound::{check_power_bound, check_set, inverse_image, PowerBoundReport, Witness};
pub use value::MeasureValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("cycles {first} and {second} share member {shared}")]
    OverlappingCycles {
        first: usize,
        second: usize,
        shared: Nat,
    },
    #[error("cycle {index} does not close under the map")]
    InvalidCycle { index: usize },
    #[error("max_n = {max_n} exceeds forest depth {depth}")]
    DepthExceeded { max_n: usize, depth: usize },
    #[error("power bound violated: mu(T^-{n}(A)) = {lhs} > 2 mu(A) = {rhs}")]
    BoundViolation {
        set: Vec<Nat>,
        n: usize,
        lhs: String,
        rhs: String,
    },
}

#[derive(Debug, Clone)]
pub struct MeasureAssignment {
    forest: PreimageForest,
    /// `μ_i(n)` for the cycle `i` owning `n`; zero under every other `μ_j`.
    per_cycle: HashMap<Nat, MeasureValue>,
    combined: HashMap<Nat, MeasureValue>,
    total: MeasureValue,
}

pub fn assign_measure(forest: PreimageForest) -> MeasureAssignment {
    let mut per_cycle: HashMap<Nat, MeasureValue> = HashMap::with_capacity(forest.len());
    for (i, cycle) in forest.cycles().iter().enumerate() {
        let n = cycle.len() as u64;
        let member_value = MeasureValue::scaled(DyadicRational::pow2_neg(1), n);
        for m in forest.level(i, 0) {
            per_cycle.insert(m.clone(), member_value.clone());
        }
        if forest.depth() == 0 {
            continue;
        }
        for (j, node) in forest.level(i, 1).iter().enumerate() {
            let j = j as u64 + 1;
            per_cycle.insert(
                node.clone(),
                MeasureValue::dyadic(DyadicRational::pow2_neg(j + 3)),
            );
        }
        for level in 1..forest.depth() {
            for parent in forest.level(i, level) {
                let m = per_cycle[parent].clone();
                for (t, child) in forest.node(parent).unwrap().children.iter().enumerate() {
                    per_cycle.insert(child.clone(), m.scale_pow2_neg(t as u64 + 2));
                }
            }
        }
    }
    let combined: HashMap<Nat, MeasureValue> = per_cycle
        .iter()
        .map(|(n, v)| {
            let i = forest.node(n).unwrap().cycle as u64 + 1;
            (n.clone(), v.scale_pow2_neg(i + 1))
        })
        .collect();
    let total = forest.covered().map(|n| &combined[n]).sum();
    MeasureAssignment {
        forest,
        per_cycle,
        combined,
        total,
    }
}

impl MeasureAssignment {
    pub fn forest(&self) -> &PreimageForest {
        &self.forest
    }

    /// Combined value `μ(n)`; zero outside the forest.
    pub fn value(&self, n: &Nat) -> MeasureValue {
        self.combined.get(n).cloned().unwrap_or_default()
    }

    /// `μ_i(n)` with `cycle` the 0-based index of `C_{i}`.
    pub fn cycle_value(&self, cycle: usize, n: &Nat) -> MeasureValue {
        match self.forest.node(n) {
            Some(node) if node.cycle == cycle => self.per_cycle[n].clone(),
            _ => MeasureValue::zero(),
        }
    }

    pub fn total(&self) -> &MeasureValue {
        &self.total
    }

    /// `μ_i` of everything covered in tree `cycle`.
    pub fn cycle_total(&self, cycle: usize) -> MeasureValue {
        (0..=self.forest.depth())
            .flat_map(|l| self.forest.level(cycle, l))
            .map(|n| &self.per_cycle[n])
            .sum()
    }

    /// `μ_i` of one level of tree `cycle`.
    pub fn level_total(&self, cycle: usize, level: usize) -> MeasureValue {
        self.forest
            .level(cycle, level)
            .iter()
            .map(|n| &self.per_cycle[n])
            .sum()
    }

    pub fn to_json<'a>(&'a self, bound: Option<&'a PowerBoundReport>) -> MeasureJson<'a> {
        let nodes = self
            .forest
            .covered()
            .map(|n| {
                let node = self.forest.node(n).unwrap();
                NodeJson {
                    n,
                    cycle: node.cycle + 1,
                    level: node.level,
                    parent: &node.parent,
                    value: &self.per_cycle[n],
                    combined: &self.combined[n],
                }
            })
            .collect();
        let cycles = self
            .forest
            .cycles()
            .iter()
            .enumerate()
            .map(|(i, c)| CycleJson {
                index: i + 1,
                members: c.members().iter().map(|m| m.to_string()).collect(),
                total: self.cycle_total(i),
            })
            .collect();
        MeasureJson {
            map: self.forest.map().to_string(),
            depth: self.forest.depth(),
            nodes,
            summary: SummaryJson {
                covered_nodes: self.forest.len(),
                total: &self.total,
                total_decimal: self.total.as_dyadic().and_then(|d| d.to_decimal_string()),
                total_approx: self.total.to_f64(),
                cycles,
                power_bound: bound,
            },
        }
    }
}

/// `μ(A)`, summing combined values; points outside the forest count 0.
pub fn measure_of<'a>(
    assignment: &MeasureAssignment,
    a: impl IntoIterator<Item = &'a Nat>,
) -> MeasureValue {
    let distinct: BTreeSet<&Nat> = a.into_iter().collect();
    distinct
        .into_iter()
        .filter_map(|n| assignment.combined.get(n))
        .sum()
}

#[derive(Serialize)]
pub struct MeasureJson<'a> {
    pub map: String,
    pub depth: usize,
    pub nodes: Vec<NodeJson<'a>>,
    pub summary: SummaryJson<'a>,
}

#[derive(Serialize)]
pub struct NodeJson<'a> {
    #[serde(serialize_with = "ser_nat")]
    pub n: &'a Nat,
    pub cycle: usize,
    pub level: usize,
    #[serde(serialize_with = "ser_opt_nat")]
    pub parent: &'a Option<Nat>,
    pub value: &'a MeasureValue,
    pub combined: &'a MeasureValue,
}

#[derive(Serialize)]
pub struct CycleJson {
    pub index: usize,
    pub members: Vec<String>,
    pub total: MeasureValue,
}

#[derive(Serialize)]
pub struct SummaryJson<'a> {
    pub covered_nodes: usize,
    pub total: &'a MeasureValue,
    pub total_decimal: Option<String>,
    pub total_approx: f64,
    pub cycles: Vec<CycleJson>,
    pub power_bound: Option<&'a PowerBoundReport>,
}
