//! Draws from exact discrete power laws, truncated and untruncated, and
//! compares empirical frequencies with the pmf.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use parid::sampling::{truncation_point, PowerLawSampler, PowerLawSpec};

fn main() -> parid::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cap = truncation_point(2.0, 10_000)?;
    let specs = [
        PowerLawSpec::untruncated(1.5)?,
        PowerLawSpec::untruncated(2.0)?,
        PowerLawSpec::truncated(2.0, cap)?,
    ];
    let n = 1_000_000;
    for spec in specs {
        let sampler = PowerLawSampler::new(spec.clone());
        let mut counts = [0_u64; 5];
        let mut largest = 0;
        for _ in 0..n {
            let x = sampler.sample(rng.random());
            largest = largest.max(x);
            if x <= 5 {
                counts[x as usize - 1] += 1;
            }
        }
        println!("alpha = {}, cap = {:?}, largest draw = {largest}", spec.alpha(), spec.cap());
        for (i, c) in counts.iter().enumerate() {
            let k = i as u64 + 1;
            println!("  P(X={k}): empirical {:.5}, exact {:.5}", *c as f64 / n as f64, spec.pmf(k));
        }
    }
    Ok(())
}
