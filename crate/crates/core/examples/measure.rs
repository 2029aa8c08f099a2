//! Exact measure on the inverse-image forest of the cycles, and a random
//! check of `μ(T^{-n}A) ≤ 2μ(A)`.

use syrdyn::maps::MapDescriptor;
use syrdyn::measure::{assign_measure, build_forest, check_power_bound};
use syrdyn::numeric::nat;
use syrdyn::trajectory::{find_cycles, Limits};

fn main() {
    let map = MapDescriptor::pxr(5, 1).unwrap();
    let cycles = find_cycles(&map, 1000, &Limits::new(10_000, nat(1_000_000_000)));
    let m = assign_measure(build_forest(&map, &cycles, 8).unwrap());

    println!("{map}: {} cycles, {} nodes", cycles.len(), m.forest().len());
    for (i, c) in cycles.iter().enumerate() {
        println!(
            "cycle through {}: mass {}",
            c.min_member(),
            m.cycle_total(i)
        );
        for level in 0..=3 {
            println!("  level {level}: {}", m.level_total(i, level));
        }
    }
    println!("total: {}", m.total());

    let report = check_power_bound(&m, 500, 8, 7).unwrap();
    println!(
        "{} checks, worst ratio {:.6}",
        report.checks, report.worst_ratio
    );
}
