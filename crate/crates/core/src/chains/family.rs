use std::collections::HashSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::maps::MapDescriptor;
use crate::numeric::{ser_nat, ser_nat_vec, Nat};

use super::{classify, decompose, split_2_3, ChainError, NodeClass};

/// The Collatz orbit segment `2^a·h − 1 → 3·2^(a−1)·h − 1 → … → 3^a·h − 1`.
///
/// Member `j` is `3^j · 2^(a−j) · h − 1`; all members but the last are odd,
/// and the last (the tail) is an even `ℕ_2` chain head.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Family {
    pub a: u32,
    #[serde(serialize_with = "ser_nat")]
    pub h: Nat,
    #[serde(serialize_with = "ser_nat_vec")]
    pub members: Vec<Nat>,
}

impl Family {
    pub fn head(&self) -> &Nat {
        &self.members[0]
    }

    pub fn tail(&self) -> &Nat {
        self.members.last().unwrap()
    }

    pub fn key(&self) -> (u32, Nat) {
        (self.a, self.h.clone())
    }
}

pub fn family_of(a: u32, h: &Nat) -> Result<Family, ChainError> {
    if a == 0 {
        return Err(ChainError::InvalidParameters("family needs a >= 1".into()));
    }
    if h.is_zero() || h.gcd(&BigUint::from(6u32)) != BigUint::one() {
        return Err(ChainError::InvalidParameters(format!(
            "h = {h} must be coprime to 6"
        )));
    }
    let three = BigUint::from(3u32);
    let members: Vec<Nat> = (0..=a)
        .map(|j| three.pow(j) * (h << (a - j)) - 1u32)
        .collect();
    let collatz = MapDescriptor::collatz();
    for w in members.windows(2) {
        if collatz.step(&w[0]) != w[1] {
            return Err(ChainError::VerificationFailure(format!(
                "T({}) != {}",
                w[0], w[1]
            )));
        }
    }
    Ok(Family {
        a,
        h: h.clone(),
        members,
    })
}

/// The family containing `n` and `n`'s position in it, or `None` when `n`
/// is an even node with `n + 1` coprime to 6 (such nodes lie in no family).
pub fn locate_family(n: &Nat) -> Option<(Family, usize)> {
    if n.is_zero() {
        return None;
    }
    let (c, b, h) = split_2_3(&(n + 1u32));
    if b + c == 0 {
        return None;
    }
    let family = family_of(b + c, &h).expect("split_2_3 yields a valid family");
    Some((family, c as usize))
}

/// How a family connects to the next: `T(tail) = link` (always in `ℕ_1`),
/// and the orbit reaches the next family at `entry`, its member number
/// `entry_position`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainLink {
    #[serde(serialize_with = "ser_nat")]
    pub tail: Nat,
    #[serde(serialize_with = "ser_nat")]
    pub link: Nat,
    #[serde(serialize_with = "ser_nat")]
    pub entry: Nat,
    pub entry_position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ChainStop {
    /// Ran out of requested links.
    LinkLimit,
    /// The next family is already in the chain.
    Cyclic,
    /// A family head outside `ℕ_1` has no family behind it.
    NotExtendable {
        #[serde(serialize_with = "ser_nat")]
        head: Nat,
        class: NodeClass,
    },
}

/// Families joined through `ℕ_1` link nodes, ordered along the map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    #[serde(serialize_with = "ser_nat")]
    pub start: Nat,
    /// Orbit points from `start` up to (excluding) its first family member;
    /// empty when `start` itself lies in a family.
    #[serde(serialize_with = "ser_nat_vec")]
    pub lead_in: Vec<Nat>,
    pub families: Vec<Family>,
    /// `links[i]` joins `families[i]` to `families[i + 1]`.
    pub links: Vec<ChainLink>,
    /// Index of the family reached from `start`.
    pub origin: usize,
    pub forward_stop: ChainStop,
    pub backward_stop: ChainStop,
    /// Link that closes the chain onto itself, when the orbit cycles.
    pub closing_link: Option<ChainLink>,
    /// Set when the chain runs into one of its own families.
    pub cyclic: bool,
}

fn forward_link(tail: &Nat) -> (ChainLink, Family) {
    let collatz = MapDescriptor::collatz();
    let link = collatz.step(tail);
    let mut entry = link.clone();
    loop {
        if let Some((family, pos)) = locate_family(&entry) {
            let l = ChainLink {
                tail: tail.clone(),
                link,
                entry,
                entry_position: pos,
            };
            return (l, family);
        }
        entry = collatz.step(&entry);
    }
}

/// Builds the chain through `n`, extending up to `links` connections forward
/// along the orbit and `links` connections backward through `ℕ_1` heads.
pub fn chain_of(n: &Nat, links: usize) -> Result<Chain, ChainError> {
    if n.is_zero() {
        return Err(ChainError::DomainError);
    }
    let collatz = MapDescriptor::collatz();
    let mut lead_in = Vec::new();
    let mut cur = n.clone();
    let (origin_family, _) = loop {
        match locate_family(&cur) {
            Some(found) => break found,
            None => {
                let next = collatz.step(&cur);
                lead_in.push(cur);
                cur = next;
            }
        }
    };
    let mut seen: HashSet<(u32, Nat)> = HashSet::from([origin_family.key()]);
    let mut forward = vec![origin_family.clone()];
    let mut forward_links = Vec::new();
    let mut closing_link = None;
    let mut forward_stop = ChainStop::LinkLimit;
    for _ in 0..links {
        let (link, next) = forward_link(forward.last().unwrap().tail());
        if !seen.insert(next.key()) {
            closing_link = Some(link);
            forward_stop = ChainStop::Cyclic;
            break;
        }
        forward_links.push(link);
        forward.push(next);
    }

    let mut backward: Vec<Family> = Vec::new();
    let mut backward_links: Vec<ChainLink> = Vec::new();
    let mut backward_stop = ChainStop::LinkLimit;
    let mut head = origin_family.head().clone();
    for _ in 0..links {
        let class = classify(&head);
        if class != NodeClass::N1 {
            backward_stop = ChainStop::NotExtendable { head, class };
            break;
        }
        // T^{-1}(3p+1) = {6p+2}: the single preimage of an ℕ_1 head
        let prev_tail: Nat = &head << 1;
        let form = decompose(&prev_tail)?;
        debug_assert!(form.is_chain_head());
        let prev = family_of(form.a, &form.h)?;
        let link = ChainLink {
            tail: prev_tail,
            link: head.clone(),
            entry: head.clone(),
            entry_position: 0,
        };
        if !seen.insert(prev.key()) {
            if closing_link.is_none() {
                closing_link = Some(link);
            }
            backward_stop = ChainStop::Cyclic;
            break;
        }
        head = prev.head().clone();
        backward_links.push(link);
        backward.push(prev);
    }

    let origin = backward.len();
    backward.reverse();
    backward_links.reverse();
    let cyclic = forward_stop == ChainStop::Cyclic || backward_stop == ChainStop::Cyclic;
    let mut families = backward;
    families.extend(forward);
    let mut all_links = backward_links;
    all_links.extend(forward_links);
    Ok(Chain {
        start: n.clone(),
        lead_in,
        families,
        links: all_links,
        origin,
        forward_stop,
        backward_stop,
        closing_link,
        cyclic,
    })
}

impl Chain {
    /// Checks the linking invariants: each tail is even, its image is in
    /// `ℕ_1`, and the orbit from the link reaches the next family's entry.
    pub fn verify(&self) -> bool {
        let collatz = MapDescriptor::collatz();
        self.links
            .iter()
            .zip(self.families.windows(2))
            .all(|(l, w)| {
                let even = l.tail.is_even();
                let n1 = classify(&l.link) == NodeClass::N1;
                let joined = w[0].tail() == &l.tail
                    && collatz.step(&l.tail) == l.link
                    && w[1].members.get(l.entry_position) == Some(&l.entry);
                let reaches = {
                    let mut x = l.link.clone();
                    let mut ok = false;
                    for _ in 0..3 {
                        if x == l.entry {
                            ok = true;
                            break;
                        }
                        x = collatz.step(&x);
                    }
                    ok
                };
                even && n1 && joined && reaches
            })
    }
}
