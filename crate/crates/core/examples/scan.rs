//! Parallel scan of a range, written as CSV.

use syrdyn::maps::MapDescriptor;
use syrdyn::numeric::nat;
use syrdyn::trajectory::{scan, scan_to_csv, Limits};

fn main() {
    let records = scan(
        &MapDescriptor::collatz(),
        1..=30,
        &Limits::new(10_000, nat(u64::MAX)),
    )
    .unwrap();
    print!("{}", scan_to_csv(&records));
}
