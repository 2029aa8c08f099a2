//! Splits `1..=N` into cycle points, points that reach a cycle, and
//! unresolved candidates.

use syrdyn::maps::MapDescriptor;
use syrdyn::numeric::nat;
use syrdyn::partition::partition;
use syrdyn::trajectory::Limits;

fn main() {
    let map = MapDescriptor::pxr(5, 1).unwrap();
    let p = partition(&map, 100, &Limits::new(1000, nat(1_000_000_000_000)));
    println!("{map} on 1..=100");
    println!("C  ({}): {:?}", p.c_set.len(), p.c_set);
    println!("D1 ({}): {:?}", p.d1_set.len(), p.d1_set);
    println!(
        "D2 candidates ({}): {:?}",
        p.d2_candidates.len(),
        p.d2_candidates
    );
}
