//! Mean-field expected degree proportions against the finite-horizon and
//! limit laws at exponent 2.
//!
//! cargo run --example mean_field -- 100000

use parid::theory::{b_k, mean_field_expectation, HorizonLaw};

fn main() -> parid::Result<()> {
    let t: u64 = std::env::args().nth(1).map_or(100_000, |s| s.parse().expect("t"));
    let m = mean_field_expectation(t, 20)?;
    let horizon = HorizonLaw::new(t)?;
    println!("t = {t}, cap = {}, sum E[R_k] = {} (t + 1 = {})", horizon.cap, m.total(), t + 1);
    println!("{:>3} {:>12} {:>12} {:>12}", "k", "E[r_k]", "b'_k(t)", "b_k");
    for k in 1..=10 {
        println!(
            "{k:>3} {:>12.6} {:>12.6} {:>12.6}",
            m.proportion(k),
            horizon.b_prime(k),
            b_k(k)
        );
    }
    Ok(())
}
