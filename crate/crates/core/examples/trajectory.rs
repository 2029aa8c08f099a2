//! Orbit of a starting value under a map, with the stopping status.
//!
//! `cargo run --example trajectory -- pxr:p=5,r=1 7`

use syrdyn::maps::parse_descriptor;
use syrdyn::numeric::nat;
use syrdyn::trajectory::{iterate, Limits};

fn main() {
    let mut args = std::env::args().skip(1);
    let map = parse_descriptor(&args.next().unwrap_or_else(|| "collatz".into())).unwrap();
    let x: u64 = args.next().map_or(27, |s| s.parse().unwrap());

    let report = iterate(&map, &nat(x), &Limits::with_max_value_pow10(10_000, 12)).unwrap();
    println!("{map} from {x}: {}", report.status.name());
    println!("steps taken: {}", report.steps.len() - 1);
    println!("max excursion: {}", report.max_excursion);
    if let Some(c) = report.cycle() {
        let members: Vec<String> = c.members().iter().map(|m| m.to_string()).collect();
        println!(
            "entered cycle [{}] after {} steps",
            members.join(", "),
            report.steps_to_cycle().unwrap()
        );
    }
}
