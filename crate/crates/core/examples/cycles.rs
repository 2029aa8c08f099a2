//! Cycles reached from starting values up to a bound.

use syrdyn::maps::MapDescriptor;
use syrdyn::numeric::nat;
use syrdyn::trajectory::{find_cycles, Limits};

fn main() {
    let limits = Limits::new(100_000, nat(1_000_000_000));
    for (p, r) in [(3, 1), (5, 1), (7, 1), (181, 1)] {
        let map = MapDescriptor::pxr(p, r).unwrap();
        let cycles = find_cycles(&map, 10_000, &limits);
        println!("{map}: {} cycles", cycles.len());
        for c in cycles {
            println!("  min {} length {}", c.min_member(), c.len());
        }
    }
}
