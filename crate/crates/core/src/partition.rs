//! Finite-domain partition of `1..=bound` into cycle points `C`, points
//! whose orbit reaches a cycle `D1`, and points left undetermined by the
//! limits (candidates for `D2`, the set holding every unbounded orbit).

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;

use crate::maps::MapDescriptor;
use crate::numeric::{ser_nat, Nat};
use crate::trajectory::{iterate, CycleInfo, Limits, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PointClass {
    C,
    D1,
    D2Candidate,
}

impl PointClass {
    pub fn label(self) -> &'static str {
        match self {
            PointClass::C => "C",
            PointClass::D1 => "D1",
            PointClass::D2Candidate => "D2?",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointRecord {
    pub x: u64,
    pub class: PointClass,
    pub steps_to_cycle: Option<usize>,
    pub max_excursion: Nat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionResult {
    pub domain_bound: u64,
    pub limits: Limits,
    /// Cycle members inside the domain.
    pub c_set: BTreeSet<u64>,
    pub d1_set: BTreeSet<u64>,
    pub d2_candidates: BTreeSet<u64>,
    /// Every cycle reached from the domain, sorted by minimal member; members
    /// may lie above `domain_bound`.
    pub cycles: Vec<CycleInfo>,
    pub records: Vec<PointRecord>,
}

struct MemoEntry {
    steps_to_cycle: usize,
    cycle: usize,
    max_excursion: Nat,
}

struct Memo {
    points: HashMap<Nat, MemoEntry>,
    cycles: Vec<(CycleInfo, Nat)>,
    cycle_ids: HashMap<Nat, usize>,
}

impl Memo {
    fn cycle_id(&mut self, cycle: CycleInfo) -> usize {
        if let Some(&id) = self.cycle_ids.get(cycle.min_member()) {
            return id;
        }
        let id = self.cycles.len();
        let max = cycle.members().iter().max().unwrap().clone();
        self.cycle_ids.insert(cycle.min_member().clone(), id);
        self.cycles.push((cycle, max));
        id
    }
}

enum Outcome {
    Cycle { entry: usize, max_excursion: Nat },
    Limit { max_excursion: Nat },
}

/// Follows the orbit of `x` exactly as [`iterate`] would, but stops early
/// when it meets a point whose fate is already cached and the cached suffix
/// fits inside the limits. Newly resolved orbit points are cached.
fn walk(map: &MapDescriptor, x: &Nat, limits: &Limits, memo: &mut Memo) -> Outcome {
    let mut steps = vec![x.clone()];
    let mut max_excursion = x.clone();
    if *x > limits.max_value {
        return Outcome::Limit { max_excursion };
    }
    let mut seen: HashMap<Nat, usize> = HashMap::new();
    seen.insert(x.clone(), 0);
    let mut use_memo = true;
    let mut applications = 0u64;
    loop {
        if use_memo {
            if let Some(hit) = memo.points.get(steps.last().unwrap()) {
                let j = steps.len() - 1;
                let (cycle, cycle_max) = &memo.cycles[hit.cycle];
                let (anchor, anchor_steps, anchor_exc) = if hit.steps_to_cycle == 0 {
                    // the prefix may already run along the cycle
                    let entry = steps.iter().position(|s| cycle.contains(s)).unwrap();
                    (entry, 0, cycle_max.clone())
                } else {
                    (j, hit.steps_to_cycle, hit.max_excursion.clone())
                };
                let needed = (anchor + anchor_steps + cycle.len()) as u64;
                if anchor_exc <= limits.max_value && needed <= limits.max_steps {
                    let id = hit.cycle;
                    steps.truncate(anchor + 1);
                    return finish(memo, steps, id, anchor_steps, anchor_exc);
                }
                use_memo = false;
            }
        }
        if applications == limits.max_steps {
            return Outcome::Limit { max_excursion };
        }
        let next = map.step(steps.last().unwrap());
        applications += 1;
        if let Some(&entry) = seen.get(&next) {
            let cycle = CycleInfo::from_orbit(steps[entry..].to_vec());
            let cycle_max = cycle.members().iter().max().unwrap().clone();
            let id = memo.cycle_id(cycle);
            steps.truncate(entry + 1);
            return finish(memo, steps, id, 0, cycle_max);
        }
        if next > max_excursion {
            max_excursion = next.clone();
        }
        let over = next > limits.max_value;
        seen.insert(next.clone(), steps.len());
        steps.push(next);
        if over {
            return Outcome::Limit { max_excursion };
        }
    }
}

/// Caches every point of a resolved orbit prefix. The last prefix point is
/// the anchor: `anchor_steps` steps from `cycle`, with its orbit peaking at
/// `anchor_exc` from there on.
fn finish(
    memo: &mut Memo,
    prefix: Vec<Nat>,
    cycle: usize,
    anchor_steps: usize,
    anchor_exc: Nat,
) -> Outcome {
    if anchor_steps == 0 {
        let (c, cycle_max) = &memo.cycles[cycle];
        for m in c.members() {
            if !memo.points.contains_key(m) {
                memo.points.insert(
                    m.clone(),
                    MemoEntry {
                        steps_to_cycle: 0,
                        cycle,
                        max_excursion: cycle_max.clone(),
                    },
                );
            }
        }
    }
    let anchor = prefix.len() - 1;
    let mut exc = anchor_exc.clone();
    for (i, p) in prefix.iter().enumerate().take(anchor).rev() {
        if *p > exc {
            exc = p.clone();
        }
        memo.points.entry(p.clone()).or_insert(MemoEntry {
            steps_to_cycle: anchor - i + anchor_steps,
            cycle,
            max_excursion: exc.clone(),
        });
    }
    let (entry, max_excursion) = if anchor == 0 {
        (anchor_steps, anchor_exc)
    } else {
        (anchor + anchor_steps, exc)
    };
    Outcome::Cycle {
        entry,
        max_excursion,
    }
}

fn assemble(
    domain_bound: u64,
    limits: &Limits,
    records: Vec<PointRecord>,
    cycles: Vec<CycleInfo>,
) -> PartitionResult {
    let mut result = PartitionResult {
        domain_bound,
        limits: limits.clone(),
        c_set: BTreeSet::new(),
        d1_set: BTreeSet::new(),
        d2_candidates: BTreeSet::new(),
        cycles,
        records,
    };
    result.cycles.sort();
    result.cycles.dedup();
    for r in &result.records {
        match r.class {
            PointClass::C => result.c_set.insert(r.x),
            PointClass::D1 => result.d1_set.insert(r.x),
            PointClass::D2Candidate => result.d2_candidates.insert(r.x),
        };
    }
    result
}

/// Classifies every `x` in `1..=domain_bound`, reusing cached orbit
/// suffixes. Produces the same result as [`partition_naive`].
pub fn partition(map: &MapDescriptor, domain_bound: u64, limits: &Limits) -> PartitionResult {
    let mut memo = Memo {
        points: HashMap::new(),
        cycles: Vec::new(),
        cycle_ids: HashMap::new(),
    };
    let mut records = Vec::with_capacity(domain_bound as usize);
    for x in 1..=domain_bound {
        let record = match walk(map, &BigUint::from(x), limits, &mut memo) {
            Outcome::Cycle {
                entry,
                max_excursion,
            } => PointRecord {
                x,
                class: if entry == 0 {
                    PointClass::C
                } else {
                    PointClass::D1
                },
                steps_to_cycle: Some(entry),
                max_excursion,
            },
            Outcome::Limit { max_excursion } => PointRecord {
                x,
                class: PointClass::D2Candidate,
                steps_to_cycle: None,
                max_excursion,
            },
        };
        records.push(record);
    }
    let cycles = memo.cycles.into_iter().map(|(c, _)| c).collect();
    assemble(domain_bound, limits, records, cycles)
}

/// Reference classification: one independent [`iterate`] per point.
pub fn partition_naive(map: &MapDescriptor, domain_bound: u64, limits: &Limits) -> PartitionResult {
    let mut cycles = Vec::new();
    let records = (1..=domain_bound)
        .map(|x| {
            let r = iterate(map, &BigUint::from(x), limits).expect("x >= 1");
            let (class, steps_to_cycle) = match &r.status {
                Status::EnteredCycle { cycle, entry_index } => {
                    cycles.push(cycle.clone());
                    let class = if *entry_index == 0 {
                        PointClass::C
                    } else {
                        PointClass::D1
                    };
                    (class, Some(*entry_index))
                }
                _ => (PointClass::D2Candidate, None),
            };
            PointRecord {
                x,
                class,
                steps_to_cycle,
                max_excursion: r.max_excursion,
            }
        })
        .collect();
    assemble(domain_bound, limits, records, cycles)
}

impl PartitionResult {
    /// `x,class,steps_to_cycle,max_excursion` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,class,steps_to_cycle,max_excursion\n");
        for r in &self.records {
            let steps = r.steps_to_cycle.map(|s| s.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{}",
                r.x,
                r.class.label(),
                steps,
                r.max_excursion
            )
            .unwrap();
        }
        out
    }

    pub fn summary(&self) -> PartitionSummary<'_> {
        PartitionSummary {
            domain_bound: self.domain_bound,
            max_steps: self.limits.max_steps,
            max_value: &self.limits.max_value,
            c_count: self.c_set.len(),
            d1_count: self.d1_set.len(),
            d2_candidate_count: self.d2_candidates.len(),
            cycles: &self.cycles,
        }
    }
}

#[derive(Serialize)]
pub struct PartitionSummary<'a> {
    pub domain_bound: u64,
    pub max_steps: u64,
    #[serde(serialize_with = "ser_nat")]
    pub max_value: &'a Nat,
    pub c_count: usize,
    pub d1_count: usize,
    pub d2_candidate_count: usize,
    pub cycles: &'a [CycleInfo],
}
