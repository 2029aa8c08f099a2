use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::numeric::DyadicRational;

/// An exact non-negative measure value `Σ_N D_N / N` with dyadic `D_N`.
///
/// Cycle members of a cycle of length `N` carry `1/(2N)`, which is dyadic
/// only when `N` is a power of two; the `1/N` factor is kept symbolically
/// and comparisons cross-multiply by the lcm of the denominators.
#[derive(Clone, Debug, Default)]
pub struct MeasureValue {
    terms: BTreeMap<u64, DyadicRational>,
}

impl MeasureValue {
    pub fn zero() -> Self {
        MeasureValue::default()
    }

    pub fn dyadic(d: DyadicRational) -> Self {
        MeasureValue::scaled(d, 1)
    }

    /// `d / denominator`. Powers of two in the denominator move into `d`,
    /// so stored denominators are odd.
    pub fn scaled(d: DyadicRational, denominator: u64) -> Self {
        assert!(denominator > 0, "denominator must be positive");
        let twos = denominator.trailing_zeros() as u64;
        let mut terms = BTreeMap::new();
        if !d.is_zero() {
            terms.insert(denominator >> twos, d.scale_pow2_neg(twos));
        }
        MeasureValue { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &DyadicRational)> {
        self.terms.iter().map(|(n, d)| (*n, d))
    }

    /// The value when it has no symbolic denominator.
    pub fn as_dyadic(&self) -> Option<DyadicRational> {
        match self.terms.len() {
            0 => Some(DyadicRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn scale_pow2_neg(&self, k: u64) -> Self {
        MeasureValue {
            terms: self
                .terms
                .iter()
                .map(|(n, d)| (*n, d.scale_pow2_neg(k)))
                .collect(),
        }
    }

    pub fn scale_pow2(&self, k: u64) -> Self {
        MeasureValue {
            terms: self
                .terms
                .iter()
                .map(|(n, d)| (*n, d.scale_pow2(k)))
                .collect(),
        }
    }

    pub fn double(&self) -> Self {
        self.scale_pow2(1)
    }

    /// `self · L` as a single dyadic, `L` a common multiple of the denominators.
    fn times_common_multiple(&self, l: &BigUint) -> DyadicRational {
        self.terms
            .iter()
            .map(|(n, d)| d.mul_integer(&(l / BigUint::from(*n))))
            .sum()
    }

    fn denominators_lcm(&self, other: &Self) -> BigUint {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .fold(BigUint::one(), |acc, n| acc.lcm(&BigUint::from(*n)))
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(n, d)| d.to_f64() / *n as f64).sum()
    }

    /// `self / other` as a float; infinite when `other` is zero and `self` is not.
    pub fn ratio_f64(&self, other: &Self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let l = self.denominators_lcm(other);
        let a = self.times_common_multiple(&l);
        let b = other.times_common_multiple(&l);
        if b.is_zero() {
            return f64::INFINITY;
        }
        // align exponents so both numerators are integers of comparable size
        let shift = a.exponent() as i64 - b.exponent() as i64;
        let (na, nb) = (a.numerator(), b.numerator());
        let bits = na.bits().max(nb.bits());
        let drop = bits.saturating_sub(60);
        let fa = num_traits::ToPrimitive::to_f64(&(na >> drop)).unwrap_or(0.0);
        let fb = num_traits::ToPrimitive::to_f64(&(nb >> drop)).unwrap_or(0.0);
        if fb == 0.0 {
            return f64::INFINITY;
        }
        fa / fb * 2f64.powi((-shift).clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }
}

impl Add for &MeasureValue {
    type Output = MeasureValue;

    fn add(self, rhs: &MeasureValue) -> MeasureValue {
        let mut terms = self.terms.clone();
        for (n, d) in &rhs.terms {
            let e = terms.entry(*n).or_default();
            *e = &*e + d;
        }
        MeasureValue { terms }
    }
}

impl std::iter::Sum for MeasureValue {
    fn sum<I: Iterator<Item = MeasureValue>>(iter: I) -> Self {
        iter.fold(MeasureValue::zero(), |acc, x| &acc + &x)
    }
}

impl<'a> std::iter::Sum<&'a MeasureValue> for MeasureValue {
    fn sum<I: Iterator<Item = &'a MeasureValue>>(iter: I) -> Self {
        iter.fold(MeasureValue::zero(), |acc, x| &acc + x)
    }
}

impl PartialEq for MeasureValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MeasureValue {}

impl Ord for MeasureValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let l = self.denominators_lcm(other);
        self.times_common_multiple(&l)
            .cmp(&other.times_common_multiple(&l))
    }
}

impl PartialOrd for MeasureValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MeasureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0/2^0");
        }
        for (i, (n, d)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *n == 1 {
                write!(f, "{d}")?;
            } else {
                write!(f, "{d} × 1/{n}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for MeasureValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
