//! Exact arithmetic shared by every engine: arbitrary-precision naturals and
//! non-negative dyadic rationals `numerator · 2^(−exponent)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Points of the dynamical system. Map-domain values are always `>= 1`;
/// zero only shows up in intermediate arithmetic.
pub type Nat = BigUint;

pub fn nat(v: u64) -> Nat {
    BigUint::from(v)
}

/// Exponent of the largest power of two dividing `n` (`0` for `n == 0`).
pub fn two_adic_valuation(n: &Nat) -> u64 {
    n.trailing_zeros().unwrap_or(0)
}

/// Serializes a `Nat` as a decimal string.
pub fn ser_nat<S: Serializer>(n: &Nat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_str_radix(10))
}

pub fn ser_nat_vec<S: Serializer>(v: &[Nat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|n| n.to_str_radix(10)))
}

pub fn ser_opt_nat<S: Serializer>(n: &Option<Nat>, s: S) -> Result<S::Ok, S::Error> {
    match n {
        Some(n) => s.serialize_some(&n.to_str_radix(10)),
        None => s.serialize_none(),
    }
}

/// A non-negative dyadic rational, kept in canonical form: the numerator is
/// odd, or the value is zero with exponent zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct DyadicRational {
    numerator: BigUint,
    exponent: u64,
}

impl DyadicRational {
    pub fn new(numerator: BigUint, exponent: u64) -> Self {
        let mut d = DyadicRational {
            numerator,
            exponent,
        };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        DyadicRational::default()
    }

    pub fn one() -> Self {
        DyadicRational::new(BigUint::one(), 0)
    }

    /// `2^(−k)`.
    pub fn pow2_neg(k: u64) -> Self {
        DyadicRational::new(BigUint::one(), k)
    }

    pub fn from_integer(n: u64) -> Self {
        DyadicRational::new(BigUint::from(n), 0)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = two_adic_valuation(&self.numerator).min(self.exponent);
        if tz > 0 {
            self.numerator >>= tz;
            self.exponent -= tz;
        }
    }

    /// Multiplies by `2^(−k)`.
    pub fn scale_pow2_neg(&self, k: u64) -> Self {
        DyadicRational::new(self.numerator.clone(), self.exponent + k)
    }

    pub fn half(&self) -> Self {
        self.scale_pow2_neg(1)
    }

    /// Multiplies by `2^k`.
    pub fn scale_pow2(&self, k: u64) -> Self {
        if self.exponent >= k {
            DyadicRational::new(self.numerator.clone(), self.exponent - k)
        } else {
            DyadicRational::new(&self.numerator << (k - self.exponent), 0)
        }
    }

    pub fn mul_integer(&self, k: &BigUint) -> Self {
        DyadicRational::new(&self.numerator * k, self.exponent)
    }

    /// Nearest `f64`; underflows to zero for exponents past the `f64` range.
    pub fn to_f64(&self) -> f64 {
        let bits = self.numerator.bits();
        // Keep the top 64 bits of the numerator so the conversion stays finite.
        let shift = bits.saturating_sub(64);
        let top = (&self.numerator >> shift).to_f64().unwrap_or(f64::INFINITY);
        let e = shift as i64 - self.exponent as i64;
        top * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    /// Exact decimal expansion, available while the exponent is at most 64.
    pub fn to_decimal_string(&self) -> Option<String> {
        if self.exponent > 64 {
            return None;
        }
        let e = self.exponent as usize;
        // n / 2^e = n·5^e / 10^e
        let scaled = &self.numerator * BigUint::from(5u32).pow(e as u32);
        let digits = scaled.to_str_radix(10);
        if e == 0 {
            return Some(digits);
        }
        let padded = format!("{:0>width$}", digits, width = e + 1);
        let (int_part, frac_part) = padded.split_at(padded.len() - e);
        Some(format!("{int_part}.{frac_part}"))
    }
}

impl Add for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        let e = self.exponent.max(rhs.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &rhs.numerator << (e - rhs.exponent);
        DyadicRational::new(a + b, e)
    }
}

impl Add for DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: DyadicRational) -> DyadicRational {
        &self + &rhs
    }
}

impl std::iter::Sum for DyadicRational {
    fn sum<I: Iterator<Item = DyadicRational>>(iter: I) -> Self {
        iter.fold(DyadicRational::zero(), |acc, x| &acc + &x)
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &other.numerator << (e - other.exponent);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}

impl Serialize for DyadicRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn dyadic_add(a: &DyadicRational, b: &DyadicRational) -> DyadicRational {
    a + b
}

pub fn dyadic_cmp(a: &DyadicRational, b: &DyadicRational) -> Ordering {
    a.cmp(b)
}
