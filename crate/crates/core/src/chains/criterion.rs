use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Pow, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::maps::{MapDescriptor, PxrDescriptor};
use crate::numeric::{ser_nat_vec, two_adic_valuation, Nat};

use super::ChainError;

fn admissible(p: i64, r: i64) -> Result<PxrDescriptor, ChainError> {
    PxrDescriptor::new(p, r).map_err(|e| ChainError::InvalidParameters(e.to_string()))
}

/// Whether the `px+r` map has a family/chain structure like Collatz:
/// true exactly for `r = p − 2` and `r = 2 − p`.
pub fn chain_criterion(p: i64, r: i64) -> Result<bool, ChainError> {
    admissible(p, r)?;
    Ok(r == p - 2 || r == 2 - p)
}

/// The residue class mod `p` of `r/(2 − p)`: the points with two preimages.
pub fn two_preimage_class(p: i64, r: i64) -> Result<u64, ChainError> {
    admissible(p, r)?;
    let e = (2 - p).extended_gcd(&p);
    // gcd(2 − p, p) = gcd(2, p) = 1 for odd p, up to sign
    debug_assert_eq!(e.gcd.abs(), 1);
    let inv = e.x * e.gcd;
    let class = (r as i128 * inv as i128).rem_euclid(p as i128);
    Ok(class as u64)
}

/// Sample ranges for the family identity checks. Only `k` coprime to the
/// relevant modulus and multiplier is used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySamples {
    pub alpha: RangeInclusive<u32>,
    pub beta: RangeInclusive<u32>,
    pub k: RangeInclusive<u64>,
}

impl Default for FamilySamples {
    fn default() -> Self {
        FamilySamples {
            alpha: 0..=4,
            beta: 1..=4,
            k: 1..=50,
        }
    }
}

impl FamilySamples {
    fn points(&self) -> impl Iterator<Item = (u32, u32, u64)> + '_ {
        self.alpha.clone().flat_map(move |a| {
            self.beta
                .clone()
                .filter(|&b| b >= 1)
                .flat_map(move |b| self.k.clone().map(move |k| (a, b, k)))
        })
    }
}

fn to_nat(x: &BigInt) -> Option<Nat> {
    match x.sign() {
        Sign::Plus => Some(x.magnitude().clone()),
        _ => None,
    }
}

/// Outcome of testing `V(m^α·d^β·k − l) = m^(α+1)·d^(β−1)·k − l` over a
/// sample grid for one branch `(m, r)` of a map with modulus `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
struct Tally {
    tested: usize,
    satisfied: usize,
}

fn tally_identity(
    map: &MapDescriptor,
    residue: u64,
    m: u64,
    l: i64,
    samples: &FamilySamples,
) -> Tally {
    let d = map.modulus();
    let (bm, bd, bl) = (BigInt::from(m), BigInt::from(d), BigInt::from(l));
    let mut t = Tally::default();
    for (alpha, beta, k) in samples.points() {
        if k == 0 || k.gcd(&(d * m)) != 1 {
            continue;
        }
        let bk = BigInt::from(k);
        let x = Pow::pow(&bm, alpha) * Pow::pow(&bd, beta) * &bk - &bl;
        let Some(x) = to_nat(&x) else { continue };
        if map.residue(&x) != residue {
            continue;
        }
        let expected = Pow::pow(&bm, alpha + 1) * Pow::pow(&bd, beta - 1) * &bk - &bl;
        t.tested += 1;
        if to_nat(&expected).is_some_and(|e| map.step(&x) == e) {
            t.satisfied += 1;
        }
    }
    t
}

/// Searches offsets `l` with `|l| ≤ p` for one that makes the family identity
/// hold on every tested sample of `pxr(p, r)`, without consulting the
/// criterion. Returns the first witness in ascending order.
pub fn search_family_offset(
    p: i64,
    r: i64,
    samples: &FamilySamples,
) -> Result<Option<i64>, ChainError> {
    let map = admissible(p, r)?.to_map();
    Ok((-p..=p).find(|&l| {
        let t = tally_identity(&map, 1, p as u64, l, samples);
        t.tested > 0 && t.tested == t.satisfied
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub p: i64,
    pub r: i64,
    pub l: i64,
    pub tested: usize,
    pub satisfied: usize,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.tested > 0 && self.tested == self.satisfied
    }
}

/// Tests `V(p^α·2^β·k − l) = p^(α+1)·2^(β−1)·k − l` with `l = r/(p − 2)`.
pub fn verify_family_identity(
    p: i64,
    r: i64,
    samples: &FamilySamples,
) -> Result<IdentityReport, ChainError> {
    let map = admissible(p, r)?.to_map();
    if r % (p - 2) != 0 {
        return Err(ChainError::NotApplicable(format!(
            "{} does not divide r = {r}",
            p - 2
        )));
    }
    let l = r / (p - 2);
    let t = tally_identity(&map, 1, p as u64, l, samples);
    Ok(IdentityReport {
        p,
        r,
        l,
        tested: t.tested,
        satisfied: t.satisfied,
    })
}

/// `count` pseudo-random family tails `p^A·k − l` (`1 ≤ A ≤ 12`, odd `k`
/// coprime to `p`, `k < 10^6`) for a map satisfying the criterion.
pub fn family_tails(p: i64, r: i64, count: usize, seed: u64) -> Result<Vec<Nat>, ChainError> {
    if !chain_criterion(p, r)? {
        return Err(ChainError::NotApplicable(format!(
            "pxr(p={p}, r={r}) has no family structure"
        )));
    }
    let l = BigInt::from(r / (p - 2));
    let bp = BigInt::from(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tails = Vec::with_capacity(count);
    while tails.len() < count {
        let a: u32 = rng.gen_range(1..=12);
        let k: i64 = 2 * rng.gen_range(0..500_000) + 1;
        if k.gcd(&p) != 1 {
            continue;
        }
        let tail = Pow::pow(&bp, a) * BigInt::from(k) - &l;
        tails.push(to_nat(&tail).expect("p^A·k ≥ 3 > |l|"));
    }
    Ok(tails)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectionReport {
    pub p: i64,
    pub r: i64,
    pub class: u64,
    pub tested: usize,
    pub landed: usize,
    /// Tails where the halving count matched `v_2(p^A·k + r/(2−p))`.
    pub valuation_agrees: usize,
    pub max_halvings: u64,
    #[serde(serialize_with = "ser_nat_vec")]
    pub sample: Vec<Nat>,
}

struct Landing {
    halvings: u64,
    formula: u64,
    landing: Nat,
}

fn land(map: &MapDescriptor, tail: &Nat, l: &BigInt, shift: &BigInt) -> Landing {
    let halvings = two_adic_valuation(tail);
    let odd = tail >> halvings;
    let landing = map.step(&odd);
    // tail + l = p^A·k
    let v = BigInt::from(tail.clone()) + l + shift;
    let formula = match to_nat(&v) {
        Some(v) => two_adic_valuation(&v),
        None => u64::MAX,
    };
    Landing {
        halvings,
        formula,
        landing,
    }
}

/// Follows each tail through its halvings to the first odd-branch step and
/// checks that it lands in the two-preimage class mod `p`. The halving count
/// is also compared against the valuation `v_2(p^A·k + r/(2−p))`.
pub fn verify_family_connection(
    p: i64,
    r: i64,
    tails: &[Nat],
) -> Result<ConnectionReport, ChainError> {
    if !chain_criterion(p, r)? {
        return Err(ChainError::NotApplicable(format!(
            "pxr(p={p}, r={r}) has no family structure"
        )));
    }
    let map = MapDescriptor::pxr(p, r).expect("admissible");
    let class = two_preimage_class(p, r)?;
    let l = BigInt::from(r / (p - 2));
    let shift = BigInt::from(r / (2 - p));
    if let Some(t) = tails.iter().find(|t| t.is_zero() || t.is_odd()) {
        return Err(ChainError::InvalidParameters(format!(
            "{t} is not an even family tail"
        )));
    }
    let landings: Vec<Landing> = tails
        .par_iter()
        .map(|t| land(&map, t, &l, &shift))
        .collect();
    let bp = BigUint::from(p as u64);
    let mut report = ConnectionReport {
        p,
        r,
        class,
        tested: tails.len(),
        landed: 0,
        valuation_agrees: 0,
        max_halvings: 0,
        sample: tails.iter().take(5).cloned().collect(),
    };
    for (tail, x) in tails.iter().zip(&landings) {
        let residue = (&x.landing % &bp).to_u64().unwrap();
        if residue != class {
            return Err(ChainError::ConnectionFailure {
                tail: tail.clone(),
                landing: x.landing.clone(),
                class,
                p,
            });
        }
        report.landed += 1;
        if x.formula == x.halvings {
            report.valuation_agrees += 1;
        }
        report.max_halvings = report.max_halvings.max(x.halvings);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum ClassIdentity {
    Applicable {
        residue: u64,
        l: i64,
        tested: usize,
        satisfied: usize,
    },
    NotApplicable {
        residue: u64,
        reason: String,
    },
}

impl ClassIdentity {
    pub fn holds(&self) -> Option<bool> {
        match self {
            ClassIdentity::Applicable {
                tested, satisfied, ..
            } => Some(*tested == *satisfied),
            ClassIdentity::NotApplicable { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralIdentityReport {
    pub map: String,
    pub classes: Vec<ClassIdentity>,
}

/// Per residue class `i` with `(m_i − d) | r_i`, tests
/// `V(m_i^α·d^β·k − l_i) = m_i^(α+1)·d^(β−1)·k − l_i`, `l_i = r_i/(m_i − d)`,
/// on the sample points that fall in class `i`.
pub fn verify_general_family_identity(
    map: &MapDescriptor,
    samples: &FamilySamples,
) -> GeneralIdentityReport {
    let d = map.modulus() as i64;
    let classes = map
        .branches()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let residue = i as u64;
            let denom = b.multiplier as i64 - d;
            if denom == 0 {
                return ClassIdentity::NotApplicable {
                    residue,
                    reason: "multiplier equals the modulus".into(),
                };
            }
            if b.offset % denom != 0 {
                return ClassIdentity::NotApplicable {
                    residue,
                    reason: format!("{denom} does not divide r{i} = {}", b.offset),
                };
            }
            let l = b.offset / denom;
            let t = tally_identity(map, residue, b.multiplier, l, samples);
            ClassIdentity::Applicable {
                residue,
                l,
                tested: t.tested,
                satisfied: t.satisfied,
            }
        })
        .collect();
    GeneralIdentityReport {
        map: map.to_string(),
        classes,
    }
}

/// Serializable verdict for one `(p, r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionVerdict {
    pub p: i64,
    pub r: i64,
    pub chain_structure: bool,
    pub two_preimage_class: u64,
    pub offset: Option<i64>,
}

impl CriterionVerdict {
    pub fn new(p: i64, r: i64) -> Result<Self, ChainError> {
        Ok(CriterionVerdict {
            p,
            r,
            chain_structure: chain_criterion(p, r)?,
            two_preimage_class: two_preimage_class(p, r)?,
            offset: (r % (p - 2) == 0).then(|| r / (p - 2)),
        })
    }
}
