//! Error functions across the range where the naive forms overflow.

use pilotwave::numerics::special::{erf, erfc, erfcx};

fn main() {
    println!("{:>8} {:>24} {:>24} {:>24}", "x", "erf", "erfc", "erfcx");
    for x in [-6.0, -1.0, 0.0, 0.5, 1.0, 3.0, 10.0, 26.0, 30.0, 1e3] {
        println!("{x:>8} {:>24.17e} {:>24.17e} {:>24.17e}", erf(x), erfc(x), erfcx(x));
    }
    // exp(x^2) * erfc(x) overflows as a product long before erfcx does.
    let x: f64 = 30.0;
    println!("naive exp(x^2)*erfc(x) at 30: {}", (x * x).exp() * erfc(x));
}
