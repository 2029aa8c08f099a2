//! Forward iteration with explicit resource limits, cycle detection and
//! cycle search over ranges of starting points.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::maps::{MapDescriptor, PxrDescriptor};
use crate::numeric::{ser_nat, ser_nat_vec, Nat};

/// Truncation of a possibly unbounded orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    pub max_steps: u64,
    pub max_value: Nat,
}

impl Limits {
    pub fn new(max_steps: u64, max_value: Nat) -> Self {
        assert!(max_steps > 0, "max_steps must be positive");
        assert!(!max_value.is_zero(), "max_value must be positive");
        Limits {
            max_steps,
            max_value,
        }
    }

    pub fn with_max_value_pow10(max_steps: u64, exp: u32) -> Self {
        Limits::new(max_steps, BigUint::from(10u32).pow(exp))
    }
}

impl Default for Limits {
    /// `10^5` steps and values up to `10^40`.
    fn default() -> Self {
        Limits::with_max_value_pow10(100_000, 40)
    }
}

/// A cycle in orbit order, rotated to start at its minimal member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CycleInfo {
    #[serde(serialize_with = "ser_nat_vec")]
    members: Vec<Nat>,
}

impl CycleInfo {
    /// Canonicalizes an orbit-ordered list of distinct members.
    pub fn from_orbit(mut orbit: Vec<Nat>) -> Self {
        assert!(!orbit.is_empty(), "a cycle has at least one member");
        let min_pos = orbit
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        orbit.rotate_left(min_pos);
        CycleInfo { members: orbit }
    }

    pub fn members(&self) -> &[Nat] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn min_member(&self) -> &Nat {
        &self.members[0]
    }

    pub fn contains(&self, x: &Nat) -> bool {
        self.members.contains(x)
    }

    /// True when every member maps to the next one and the last to the first.
    pub fn verify(&self, map: &MapDescriptor) -> bool {
        let n = self.members.len();
        let distinct = {
            let mut sorted = self.members.clone();
            sorted.sort();
            sorted.dedup();
            sorted.len() == n
        };
        distinct
            && self.members.iter().all(|m| !m.is_zero())
            && (0..n).all(|i| map.step(&self.members[i]) == self.members[(i + 1) % n])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    EnteredCycle {
        cycle: CycleInfo,
        entry_index: usize,
    },
    HitStepLimit,
    HitValueLimit,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::EnteredCycle { .. } => "EnteredCycle",
            Status::HitStepLimit => "HitStepLimit",
            Status::HitValueLimit => "HitValueLimit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryReport {
    pub start: Nat,
    /// `steps[0] = start`, `steps[j+1] = T(steps[j])`.
    pub steps: Vec<Nat>,
    pub status: Status,
    pub max_excursion: Nat,
}

impl TrajectoryReport {
    pub fn cycle(&self) -> Option<&CycleInfo> {
        match &self.status {
            Status::EnteredCycle { cycle, .. } => Some(cycle),
            _ => None,
        }
    }

    /// Number of steps before the orbit is inside its cycle.
    pub fn steps_to_cycle(&self) -> Option<usize> {
        match &self.status {
            Status::EnteredCycle { entry_index, .. } => Some(*entry_index),
            _ => None,
        }
    }

    pub fn to_json(&self) -> TrajectoryJson<'_> {
        TrajectoryJson {
            start: &self.start,
            steps: &self.steps,
            status: self.status.name(),
            entry_index: self.steps_to_cycle(),
            max_excursion: &self.max_excursion,
            cycle: self.cycle().map(|c| c.members()),
        }
    }
}

#[derive(Serialize)]
pub struct TrajectoryJson<'a> {
    #[serde(serialize_with = "ser_nat")]
    start: &'a Nat,
    #[serde(serialize_with = "ser_nat_vec")]
    steps: &'a [Nat],
    status: &'static str,
    entry_index: Option<usize>,
    #[serde(serialize_with = "ser_nat")]
    max_excursion: &'a Nat,
    #[serde(serialize_with = "ser_opt_members")]
    cycle: Option<&'a [Nat]>,
}

fn ser_opt_members<S: serde::Serializer>(c: &Option<&[Nat]>, s: S) -> Result<S::Ok, S::Error> {
    match c {
        Some(m) => ser_nat_vec(m, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrajectoryError {
    #[error("trajectories start at 1 or above")]
    DomainError,
    #[error("power cycle needs 2 <= k <= 62, got {0}")]
    BadExponent(u32),
    #[error("cycle {members:?} failed verification under p = 2^{k} - 1")]
    VerificationFailure { k: u32, members: Vec<String> },
}

/// Iterates until a value repeats, `max_steps` applications are spent, or a
/// value exceeds `max_value` (the offending value is kept in `steps`).
pub fn iterate(
    map: &MapDescriptor,
    start: &Nat,
    limits: &Limits,
) -> Result<TrajectoryReport, TrajectoryError> {
    if start.is_zero() {
        return Err(TrajectoryError::DomainError);
    }
    let mut steps = vec![start.clone()];
    let mut max_excursion = start.clone();
    if *start > limits.max_value {
        return Ok(TrajectoryReport {
            start: start.clone(),
            steps,
            status: Status::HitValueLimit,
            max_excursion,
        });
    }
    let mut seen: HashMap<Nat, usize> = HashMap::new();
    seen.insert(start.clone(), 0);
    let mut applications = 0u64;
    let status = loop {
        if applications == limits.max_steps {
            break Status::HitStepLimit;
        }
        let next = map.step(steps.last().unwrap());
        applications += 1;
        if let Some(&entry_index) = seen.get(&next) {
            let cycle = CycleInfo::from_orbit(steps[entry_index..].to_vec());
            break Status::EnteredCycle { cycle, entry_index };
        }
        if next > max_excursion {
            max_excursion = next.clone();
        }
        let over = next > limits.max_value;
        seen.insert(next.clone(), steps.len());
        steps.push(next);
        if over {
            break Status::HitValueLimit;
        }
    };
    Ok(TrajectoryReport {
        start: start.clone(),
        steps,
        status,
        max_excursion,
    })
}

/// Every distinct cycle reached from starts `1..=search_bound`, sorted by
/// minimal member. Starts are scanned in parallel; the result does not
/// depend on scheduling.
pub fn find_cycles(map: &MapDescriptor, search_bound: u64, limits: &Limits) -> Vec<CycleInfo> {
    let found: BTreeMap<Nat, CycleInfo> = (1..=search_bound)
        .into_par_iter()
        .filter_map(|x| {
            iterate(map, &BigUint::from(x), limits)
                .ok()
                .and_then(|r| r.cycle().cloned())
        })
        .map(|c| (c.min_member().clone(), c))
        .collect();
    found.into_values().collect()
}

/// Per-point outcome of a range scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRecord {
    pub x: u64,
    pub status: &'static str,
    pub steps_to_cycle: Option<usize>,
    pub max_excursion: Nat,
    pub cycle_min: Option<Nat>,
}

/// Iterates every start in `range` in parallel; records come back in
/// ascending order of `x`.
pub fn scan(
    map: &MapDescriptor,
    range: std::ops::RangeInclusive<u64>,
    limits: &Limits,
) -> Result<Vec<ScanRecord>, TrajectoryError> {
    if *range.start() == 0 {
        return Err(TrajectoryError::DomainError);
    }
    range
        .into_par_iter()
        .map(|x| {
            let r = iterate(map, &BigUint::from(x), limits)?;
            Ok(ScanRecord {
                x,
                status: r.status.name(),
                steps_to_cycle: r.steps_to_cycle(),
                cycle_min: r.cycle().map(|c| c.min_member().clone()),
                max_excursion: r.max_excursion,
            })
        })
        .collect()
}

/// `x,status,steps_to_cycle,max_excursion,cycle_min` rows with a header.
pub fn scan_to_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from("x,status,steps_to_cycle,max_excursion,cycle_min\n");
    for r in records {
        let steps = r.steps_to_cycle.map(|s| s.to_string()).unwrap_or_default();
        let cmin = r
            .cycle_min
            .as_ref()
            .map(|c| c.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.x, r.status, steps, r.max_excursion, cmin
        ));
    }
    out
}

/// Builds and verifies `{1, 2^(k−1), …, 2}` under `p = 2^k − 1`, `r = 1`.
pub fn check_power_cycle(k: u32) -> Result<CycleInfo, TrajectoryError> {
    if !(2..=62).contains(&k) {
        return Err(TrajectoryError::BadExponent(k));
    }
    let mut members = vec![BigUint::one()];
    members.extend((1..k).rev().map(|e| BigUint::one() << e));
    let cycle = CycleInfo { members };
    let p = (1i64 << k) - 1;
    let ok = PxrDescriptor::new(p, 1)
        .map(|d| cycle.verify(&d.to_map()))
        .unwrap_or(false);
    if ok {
        Ok(cycle)
    } else {
        Err(TrajectoryError::VerificationFailure {
            k,
            members: cycle.members.iter().map(|m| m.to_string()).collect(),
        })
    }
}
