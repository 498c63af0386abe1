//! The inequality checks: large-draw tail (exact), total edge count (Monte
//! Carlo), inverse moments and the product difference sweep.

use parid::theory::{check_inverse_moments, check_lemma31, check_lemma32, product_sweep};

fn main() -> parid::Result<()> {
    for (alpha, t, gamma) in [(1.5, 100, 1.0), (1.9, 10_000, 2.0), (1.2, 1_000, 40.0)] {
        let v = check_lemma32(alpha, t, gamma)?;
        println!("tail  alpha={alpha} t={t} gamma={gamma}: {:.3e} >= {:.3e}: {}", v.observed_value, v.bound_value, v.holds);
    }
    let v = check_lemma31(1.5, 1_000, 8.0, 20_000, 1)?;
    println!("sum   P(sum < threshold) = {:.4} vs bound {:.4}: {}", v.observed_value, v.bound_value, v.holds);
    for ell in [1, 2] {
        let v = check_inverse_moments(10_000, 10_000, ell, 2_000, 2)?;
        println!("inv   ell={ell}: ratio {:.4}: {}", v.observed_value, v.holds);
    }
    let s = product_sweep(100_000, 3);
    println!("prod  {} cases, {} violations", s.cases, s.violations);
    Ok(())
}
