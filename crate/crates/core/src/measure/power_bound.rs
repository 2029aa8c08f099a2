use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::numeric::{ser_nat_vec, Nat};

use super::{measure_of, MeasureAssignment, MeasureError, MeasureValue};

/// The set and exponent attaining the largest observed ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "ser_nat_vec")]
    pub set: Vec<Nat>,
    pub n: usize,
    pub lhs: MeasureValue,
    pub rhs: MeasureValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerBoundReport {
    pub bound: u32,
    pub trials: usize,
    pub max_n: usize,
    pub seed: u64,
    pub checks: usize,
    /// Largest `μ(T^{-n}(A)) / μ(A)` seen.
    pub worst_ratio: f64,
    pub worst: Option<Witness>,
}

/// `T^{-n}(A)` restricted to the forest.
pub fn inverse_image(assignment: &MeasureAssignment, a: &BTreeSet<Nat>, n: usize) -> BTreeSet<Nat> {
    let forest = assignment.forest();
    let mut current: BTreeSet<Nat> = a.iter().filter(|x| forest.is_covered(x)).cloned().collect();
    for _ in 0..n {
        current = current
            .iter()
            .flat_map(|x| forest.covered_preimage(x))
            .collect();
    }
    current
}

/// Checks `μ(T^{-n}(A)) ≤ 2μ(A)` for one set; returns both sides.
pub fn check_set(
    assignment: &MeasureAssignment,
    a: &BTreeSet<Nat>,
    n: usize,
) -> Result<(MeasureValue, MeasureValue), MeasureError> {
    let lhs = measure_of(assignment, &inverse_image(assignment, a, n));
    let rhs = measure_of(assignment, a);
    if lhs > rhs.double() {
        return Err(MeasureError::BoundViolation {
            set: a.iter().cloned().collect(),
            n,
            lhs: lhs.to_string(),
            rhs: rhs.double().to_string(),
        });
    }
    Ok((lhs, rhs))
}

fn sample_set(rng: &mut ChaCha8Rng, covered: &[Nat]) -> BTreeSet<Nat> {
    let pick = |rng: &mut ChaCha8Rng| covered[rng.gen_range(0..covered.len())].clone();
    match rng.gen_range(0..3) {
        0 => BTreeSet::from([pick(rng)]),
        1 => {
            let size = rng.gen_range(2..=8);
            (0..size).map(|_| pick(rng)).collect()
        }
        _ => {
            let density: f64 = rng.gen_range(0.05..0.95);
            let set: BTreeSet<Nat> = covered
                .iter()
                .filter(|_| rng.gen_bool(density))
                .cloned()
                .collect();
            if set.is_empty() {
                BTreeSet::from([pick(rng)])
            } else {
                set
            }
        }
    }
}

/// Samples `trials` nonempty subsets of the forest (deterministically from
/// `seed`) and checks the power bound with `M = 2` for `n = 1..=max_n`.
///
/// Preimages past the truncation depth are unknown, so `max_n` may not
/// exceed the forest depth.
pub fn check_power_bound(
    assignment: &MeasureAssignment,
    trials: usize,
    max_n: usize,
    seed: u64,
) -> Result<PowerBoundReport, MeasureError> {
    let depth = assignment.forest().depth();
    if max_n > depth {
        return Err(MeasureError::DepthExceeded { max_n, depth });
    }
    let covered: Vec<Nat> = assignment.forest().covered().cloned().collect();
    let mut report = PowerBoundReport {
        bound: 2,
        trials,
        max_n,
        seed,
        checks: 0,
        worst_ratio: 0.0,
        worst: None,
    };
    if covered.is_empty() {
        return Ok(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let a = sample_set(&mut rng, &covered);
        let rhs = measure_of(assignment, &a);
        let mut image = a.clone();
        for n in 1..=max_n {
            image = inverse_image(assignment, &image, 1);
            let lhs = measure_of(assignment, &image);
            report.checks += 1;
            let ratio = lhs.ratio_f64(&rhs);
            if ratio > report.worst_ratio || report.worst.is_none() {
                report.worst_ratio = ratio;
                report.worst = Some(Witness {
                    set: a.iter().cloned().collect(),
                    n,
                    lhs: lhs.clone(),
                    rhs: rhs.clone(),
                });
            }
            if lhs > rhs.double() {
                return Err(MeasureError::BoundViolation {
                    set: a.iter().cloned().collect(),
                    n,
                    lhs: lhs.to_string(),
                    rhs: rhs.double().to_string(),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use num_bigint::BigUint;

    use super::*;
    use crate::maps::MapDescriptor;
    use crate::measure::{assign_measure, build_forest};
    use crate::numeric::{nat, DyadicRational};
    use crate::trajectory::CycleInfo;

    fn collatz(depth: usize) -> MeasureAssignment {
        let cycle = CycleInfo::from_orbit(vec![nat(1), nat(2)]);
        assign_measure(build_forest(&MapDescriptor::collatz(), &[cycle], depth).unwrap())
    }

    fn dy(n: u64, e: u64) -> MeasureValue {
        MeasureValue::dyadic(DyadicRational::new(BigUint::from(n), e))
    }

    #[test]
    fn single_node_four() {
        let m = collatz(6);
        let (lhs, rhs) = check_set(&m, &BTreeSet::from([nat(4)]), 1).unwrap();
        // μ({8}) = 2^-2 · 2^-6 against μ({4}) = 2^-2 · 2^-4
        assert_eq!(lhs, dy(1, 8));
        assert_eq!(rhs, dy(1, 6));
    }

    #[test]
    fn the_cycle_itself() {
        let m = collatz(6);
        let a = BTreeSet::from([nat(1), nat(2)]);
        assert_eq!(
            inverse_image(&m, &a, 1),
            BTreeSet::from([nat(1), nat(2), nat(4)])
        );
        let (lhs, rhs) = check_set(&m, &a, 1).unwrap();
        assert_eq!(lhs, &dy(1, 3) + &dy(1, 6));
        assert_eq!(rhs, dy(1, 3));
    }

    #[test]
    fn empty_set() {
        let m = collatz(4);
        let (lhs, rhs) = check_set(&m, &BTreeSet::new(), 3).unwrap();
        assert!(lhs.is_zero() && rhs.is_zero());
    }

    #[test]
    fn sampled_check_is_reproducible() {
        let m = collatz(10);
        let a = check_power_bound(&m, 200, 8, 7).unwrap();
        let b = check_power_bound(&m, 200, 8, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.checks, 200 * 8);
        assert!(a.worst_ratio <= 2.0);
    }

    #[test]
    fn depth_guard() {
        let m = collatz(3);
        assert_eq!(
            check_power_bound(&m, 1, 4, 0),
            Err(MeasureError::DepthExceeded { max_n: 4, depth: 3 })
        );
    }
}
