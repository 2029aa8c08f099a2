//! Syracuse-type maps `x ↦ (m_i·x + r_i)/d` for `x ≡ i (mod d)`, with the
//! Collatz map and the `px+r` family as special constructions.

mod parse;

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::numeric::Nat;

pub use parse::{parse_descriptor, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("expected {expected} branches, got {found}")]
    BranchCount { expected: usize, found: usize },
    #[error("branch {residue}: multiplier must be positive")]
    ZeroMultiplier { residue: u64 },
    #[error("gcd of multiplier product with modulus is {gcd}, not 1")]
    GcdViolation { gcd: u64 },
    #[error("branch {residue}: m·{residue} + r = {value} is not divisible by {modulus}")]
    NonIntegerBranch {
        residue: u64,
        value: i128,
        modulus: u64,
    },
    #[error("branch {residue}: x = {witness} maps to {image}, below 1")]
    NonPositiveImage {
        residue: u64,
        witness: u64,
        image: i128,
    },
    #[error("invalid px+r parameters p={p}, r={r}: {reason}")]
    InvalidPxr {
        p: i64,
        r: i64,
        reason: &'static str,
    },
    #[error("map domain starts at 1, got 0")]
    DomainError,
}

/// One affine branch `(multiplier·x + offset)/d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Branch {
    pub multiplier: u64,
    pub offset: i64,
}

impl Branch {
    pub fn new(multiplier: u64, offset: i64) -> Self {
        Branch { multiplier, offset }
    }
}

/// A validated Syracuse-type map. Construct through [`MapDescriptor::new`],
/// [`MapDescriptor::collatz`] or [`PxrDescriptor`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MapDescriptor {
    modulus: u64,
    branches: Vec<Branch>,
}

/// Unchecked parameters of a map, as read from input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMap {
    pub modulus: u64,
    pub branches: Vec<Branch>,
}

/// Checks integrality, coprimality and positivity of a raw descriptor.
pub fn validate(raw: RawMap) -> Result<MapDescriptor, MapError> {
    let d = raw.modulus;
    if d < 2 {
        return Err(MapError::BadModulus(d));
    }
    if raw.branches.len() as u64 != d {
        return Err(MapError::BranchCount {
            expected: d as usize,
            found: raw.branches.len(),
        });
    }
    for (i, b) in raw.branches.iter().enumerate() {
        if b.multiplier == 0 {
            return Err(MapError::ZeroMultiplier { residue: i as u64 });
        }
    }
    // gcd(Π m_i, d) = 1 iff every m_i is coprime to d; report the product's gcd.
    let product: BigUint = raw
        .branches
        .iter()
        .map(|b| BigUint::from(b.multiplier))
        .product();
    let g = product.gcd(&BigUint::from(d)).to_u64().unwrap_or(0);
    if g != 1 {
        return Err(MapError::GcdViolation { gcd: g });
    }
    for (i, b) in raw.branches.iter().enumerate() {
        let i = i as u64;
        let value = b.multiplier as i128 * i as i128 + b.offset as i128;
        if value.rem_euclid(d as i128) != 0 {
            return Err(MapError::NonIntegerBranch {
                residue: i,
                value,
                modulus: d,
            });
        }
        // Images grow with x, so the smallest domain point of the class decides.
        let witness = if i == 0 { d } else { i };
        let numer = b.multiplier as i128 * witness as i128 + b.offset as i128;
        let image = numer.div_euclid(d as i128);
        if image < 1 {
            return Err(MapError::NonPositiveImage {
                residue: i,
                witness,
                image,
            });
        }
    }
    Ok(MapDescriptor {
        modulus: d,
        branches: raw.branches,
    })
}

impl MapDescriptor {
    pub fn new(modulus: u64, branches: Vec<Branch>) -> Result<Self, MapError> {
        validate(RawMap { modulus, branches })
    }

    /// `T(x) = (3x+1)/2` on odd `x`, `x/2` on even `x`.
    pub fn collatz() -> Self {
        PxrDescriptor::COLLATZ.to_map()
    }

    pub fn pxr(p: i64, r: i64) -> Result<Self, MapError> {
        Ok(PxrDescriptor::new(p, r)?.to_map())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// The `px+r` parameters when this is a `d = 2` map with halving on evens.
    pub fn as_pxr(&self) -> Option<PxrDescriptor> {
        if self.modulus != 2 || self.branches[0] != Branch::new(1, 0) {
            return None;
        }
        let b = self.branches[1];
        PxrDescriptor::new(b.multiplier as i64, b.offset).ok()
    }

    pub fn is_collatz(&self) -> bool {
        self.as_pxr() == Some(PxrDescriptor::COLLATZ)
    }

    pub fn residue(&self, x: &Nat) -> u64 {
        (x % self.modulus).to_u64().expect("residue below modulus")
    }

    /// One forward step. Errors only on `x = 0`.
    pub fn apply(&self, x: &Nat) -> Result<Nat, MapError> {
        if x.is_zero() {
            return Err(MapError::DomainError);
        }
        Ok(self.step(x))
    }

    /// Forward step for `x >= 1`; positivity was checked at validation.
    pub(crate) fn step(&self, x: &Nat) -> Nat {
        let b = self.branches[self.residue(x) as usize];
        let mut v = x * b.multiplier;
        if b.offset >= 0 {
            v += b.offset as u64;
        } else {
            v -= b.offset.unsigned_abs();
        }
        v / self.modulus
    }

    /// All `x >= 1` with `apply(x) = y`, ascending.
    pub fn preimage(&self, y: &Nat) -> Vec<Nat> {
        if y.is_zero() {
            return Vec::new();
        }
        let dy = y * self.modulus;
        let mut out = Vec::with_capacity(self.modulus as usize);
        for (i, b) in self.branches.iter().enumerate() {
            // x = (d·y − r_i)/m_i
            let numer = if b.offset >= 0 {
                let r = BigUint::from(b.offset as u64);
                if dy <= r {
                    continue;
                }
                &dy - r
            } else {
                &dy + b.offset.unsigned_abs()
            };
            let (x, rem) = numer.div_rem(&BigUint::from(b.multiplier));
            if rem.is_zero() && !x.is_zero() && self.residue(&x) == i as u64 {
                out.push(x);
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for MapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(pxr) = self.as_pxr() {
            return write!(f, "{pxr}");
        }
        write!(f, "d={}", self.modulus)?;
        for (i, b) in self.branches.iter().enumerate() {
            write!(f, ";m{i}={},r{i}={}", b.multiplier, b.offset)?;
        }
        Ok(())
    }
}

/// `x ↦ (p·x + r)/2` on odd `x`, `x/2` on even `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PxrDescriptor {
    p: i64,
    r: i64,
}

impl PxrDescriptor {
    pub const COLLATZ: PxrDescriptor = PxrDescriptor { p: 3, r: 1 };

    pub fn new(p: i64, r: i64) -> Result<Self, MapError> {
        let bad = |reason| MapError::InvalidPxr { p, r, reason };
        if p < 3 || p % 2 == 0 {
            return Err(bad("p must be odd and at least 3"));
        }
        if r.rem_euclid(2) != 1 {
            return Err(bad("r must be odd"));
        }
        if r.abs() >= p {
            return Err(bad("|r| must be below p"));
        }
        if r.gcd(&p) != 1 {
            return Err(bad("r must be coprime to p"));
        }
        Ok(PxrDescriptor { p, r })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn to_map(self) -> MapDescriptor {
        MapDescriptor::new(
            2,
            vec![Branch::new(1, 0), Branch::new(self.p as u64, self.r)],
        )
        .expect("px+r parameters always give a valid map")
    }
}

impl fmt::Display for PxrDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == PxrDescriptor::COLLATZ {
            f.write_str("collatz")
        } else {
            write!(f, "pxr:p={},r={}", self.p, self.r)
        }
    }
}

impl From<PxrDescriptor> for MapDescriptor {
    fn from(p: PxrDescriptor) -> Self {
        p.to_map()
    }
}
