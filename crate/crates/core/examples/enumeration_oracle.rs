//! Exact law of the degree multiset for a tiny instance against simulation.

use parid::theory::{exact_enumeration_oracle, monte_carlo_distribution, total_variation};

fn main() -> parid::Result<()> {
    let pmf = [0.7, 0.3];
    let exact = exact_enumeration_oracle(&pmf, 0.0, 3)?;
    let empirical = monte_carlo_distribution(&pmf, 0.0, 3, 1_000_000, 5)?;
    for (multiset, p) in &exact.probabilities {
        let q = empirical.get(multiset).copied().unwrap_or(0.0);
        println!("{multiset:?}: exact {p:.6}, simulated {q:.6}");
    }
    println!("total variation: {:.5}", total_variation(&exact.probabilities, &empirical));
    Ok(())
}
