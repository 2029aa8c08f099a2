//! Exact dyadic arithmetic.

use num_bigint::BigUint;
use syrdyn::numeric::{dyadic_add, DyadicRational};

fn main() {
    let a = DyadicRational::pow2_neg(3);
    let b = DyadicRational::new(BigUint::from(6u32), 4);
    println!("{a} + {b} = {}", dyadic_add(&a, &b));

    let tiny = DyadicRational::pow2_neg(200);
    let sum: DyadicRational = std::iter::repeat_n(tiny.clone(), 1 << 10).sum();
    println!("2^10 copies of {tiny} = {sum}");
    println!(
        "1/2^7 as decimal: {}",
        DyadicRational::pow2_neg(7).to_decimal_string().unwrap()
    );
}
