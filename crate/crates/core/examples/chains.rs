//! Families `3^j·2^(a−j)·h − 1` along a Collatz orbit and the links between
//! them.

use syrdyn::chains::{chain_of, chain_to_dot};
use syrdyn::numeric::nat;

fn main() {
    let n: u64 = std::env::args().nth(1).map_or(27, |s| s.parse().unwrap());
    let chain = chain_of(&nat(n), 3).unwrap();
    for f in &chain.families {
        let members: Vec<String> = f.members.iter().map(|m| m.to_string()).collect();
        println!("a={} h={}: {}", f.a, f.h, members.join(" -> "));
    }
    assert!(chain.verify());
    println!("\n{}", chain_to_dot(&chain));
}
