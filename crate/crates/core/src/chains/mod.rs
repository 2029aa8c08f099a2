//! Backward structure of the Collatz map and of `px+r` maps: residue
//! classes mod 3, the `3^a·2^b·h − 1` form of `ℕ_2` nodes, families, chains,
//! inverse-image trees, and the chain-structure criterion for `px+r`.
//!
//! Under the Collatz map `T`, for `p ≥ 0`:
//!
//! ```text
//! T^{-1}(3p)   = {6p}
//! T^{-1}(3p+1) = {6p+2}
//! T^{-1}(3p+2) = {2p+1, 6p+4}
//! ```
//!
//! so only `ℕ_2` nodes branch. Writing such a node as `3^a·2^b·h − 1` with
//! `gcd(h, 6) = 1`, its preimages are `3^(a−1)·2^(b+1)·h − 1` and its double.

mod criterion;
mod dot;
mod family;
mod tree;

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::numeric::{ser_nat, Nat};

pub use criterion::{
    chain_criterion, family_tails, search_family_offset, two_preimage_class,
    verify_family_connection, verify_family_identity, verify_general_family_identity,
    ClassIdentity, ConnectionReport, CriterionVerdict, FamilySamples, GeneralIdentityReport,
    IdentityReport,
};
pub use dot::{chain_to_dot, tree_to_dot};
pub use family::{chain_of, family_of, locate_family, Chain, ChainLink, ChainStop, Family};
pub use tree::{build_preimage_tree, PreimageTree, TreeNode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("{0} is not 2 mod 3")]
    NotInN2(Nat),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("verification failed: {0}")]
    VerificationFailure(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("family tail {tail} lands at {landing}, outside class {class} mod {p}")]
    ConnectionFailure {
        tail: Nat,
        landing: Nat,
        class: u64,
        p: i64,
    },
    #[error("nodes start at 1")]
    DomainError,
}

/// Residue of a node mod 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NodeClass {
    N0,
    N1,
    N2,
}

impl fmt::Display for NodeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NodeClass::N0 => "N0",
            NodeClass::N1 => "N1",
            NodeClass::N2 => "N2",
        };
        f.write_str(s)
    }
}

pub fn classify(n: &Nat) -> NodeClass {
    match (n % 3u32).to_u32().unwrap() {
        0 => NodeClass::N0,
        1 => NodeClass::N1,
        _ => NodeClass::N2,
    }
}

/// `n = 3^a · 2^b · h − 1` with `a >= 1` and `gcd(h, 6) = 1`.
/// Nodes with `b = 0` are chain heads.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ChainHeadForm {
    pub a: u32,
    pub b: u32,
    #[serde(serialize_with = "ser_nat")]
    pub h: Nat,
}

impl ChainHeadForm {
    pub fn reconstruct(&self) -> Nat {
        BigUint::from(3u32).pow(self.a) * (&self.h << self.b) - 1u32
    }

    pub fn is_chain_head(&self) -> bool {
        self.b == 0
    }
}

impl fmt::Display for ChainHeadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "3^{}·2^{}·{}−1", self.a, self.b, self.h)
    }
}

/// Strips the factors 3 and 2 from `m`: `m = 3^c · 2^b · rest`.
pub(crate) fn split_2_3(m: &Nat) -> (u32, u32, Nat) {
    let three = BigUint::from(3u32);
    let mut rest = m.clone();
    let mut c = 0;
    loop {
        let (q, r) = rest.div_rem(&three);
        if !r.is_zero() {
            break;
        }
        rest = q;
        c += 1;
    }
    let b = rest.trailing_zeros().unwrap_or(0);
    rest >>= b;
    (c, b as u32, rest)
}

pub fn decompose(n: &Nat) -> Result<ChainHeadForm, ChainError> {
    if classify(n) != NodeClass::N2 {
        return Err(ChainError::NotInN2(n.clone()));
    }
    let (a, b, h) = split_2_3(&(n + 1u32));
    Ok(ChainHeadForm { a, b, h })
}

/// The two Collatz preimages of an `ℕ_2` node, computed in `(a, b, h)`
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredPreimage {
    /// `3^(a−1) · 2^(b+1) · h − 1`
    pub odd: Nat,
    /// `2n`
    pub even: Nat,
}

pub fn structured_preimage(n: &Nat) -> Result<StructuredPreimage, ChainError> {
    let form = decompose(n)?;
    let odd = BigUint::from(3u32).pow(form.a - 1) * (&form.h << (form.b + 1)) - BigUint::one();
    let even = form.reconstruct() << 1;
    Ok(StructuredPreimage { odd, even })
}
