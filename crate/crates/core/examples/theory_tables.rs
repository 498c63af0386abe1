//! Limit law b_k, the finite-horizon b'_k(t) and the heavy-tail constants.

use parid::sampling::tail_constants;
use parid::theory::{HorizonLaw, TheoryTable};

fn main() -> parid::Result<()> {
    let table = TheoryTable::new(10_000, Some(10_000))?;
    for k in 1..=5 {
        println!("b_{k} = {:.6}   b'_{k}(1e4) = {:.6}", table.b_k[k - 1], table.b_k_prime[k - 1]);
    }
    println!("1 - sum_(k<=1e4) b_k = {:e}", table.tail_remainder);
    println!("max recursion residual = {:e}", table.max_abs_residual());
    println!("sum_k b'_k = {:.15}", HorizonLaw::new(10_000)?.b_prime_total());

    for alpha in [1.2, 1.5, 1.8] {
        let k = tail_constants(alpha, 100)?;
        println!("alpha = {alpha}: c = {:.4}, C(alpha, 100) = {:.4}, C_inf = {:.4}", k.c, k.c_of_t, k.c_inf);
    }
    Ok(())
}
