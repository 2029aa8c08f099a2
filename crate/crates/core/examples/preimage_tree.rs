//! Inverse-image tree of a root value, printed as DOT.

use syrdyn::chains::{build_preimage_tree, tree_to_dot};
use syrdyn::maps::MapDescriptor;
use syrdyn::numeric::nat;

fn main() {
    let tree = build_preimage_tree(&MapDescriptor::collatz(), &nat(8), 4).unwrap();
    for depth in 0..=4 {
        let values: Vec<String> = tree.level(depth).iter().map(|n| n.to_string()).collect();
        println!("depth {depth}: {}", values.join(" "));
    }
    print!("{}", tree_to_dot(&tree));
}
