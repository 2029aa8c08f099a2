//! Map descriptors from text, including rejected ones.

use syrdyn::maps::parse_descriptor;
use syrdyn::numeric::nat;

fn main() {
    for text in [
        "collatz",
        "pxr:p=5,r=-3",
        "d=3;m0=1,r0=0;m1=2,r1=1;m2=4,r2=1",
        "pxr:p=5,r=2",
        "d=2;m0=2,r0=0;m1=3,r1=1",
    ] {
        match parse_descriptor(text) {
            Ok(map) => {
                let images: Vec<String> = (1..=6u64)
                    .map(|x| map.apply(&nat(x)).unwrap().to_string())
                    .collect();
                println!("{text:<34} {map}: 1..6 -> {}", images.join(" "));
            }
            Err(e) => println!("{text:<34} rejected: {e}"),
        }
    }
}
