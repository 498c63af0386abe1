//! Cross-replica spread of r_1 at exponent 2 (shrinks) and at exponent 1.5
//! without truncation (persists).

use parid::ensemble::{concentration_diagnostic, run_ensemble, EnsembleConfig};
use parid::process::{ParidConfig, Truncation};

fn main() -> parid::Result<()> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cases = [
        (ParidConfig::power_law(2.0, Truncation::HorizonAlphaEq2, 100_000), 50, 1_000),
        (ParidConfig::power_law(1.5, Truncation::None, 2_000), 64, 500),
    ];
    for (base, replicas, early) in cases {
        let alpha = base.alpha().unwrap();
        let late = base.steps;
        let cfg = EnsembleConfig::new(base.with_k_max(50), replicas, 7)
            .with_parallelism(threads)
            .with_tracked_k(vec![1])
            .with_checkpoints(vec![early]);
        let out = run_ensemble(&cfg)?;
        let report = concentration_diagnostic(&out.summary, early, late, cfg.thresholds)?;
        let e = report.entry(1).unwrap();
        println!(
            "alpha = {alpha}: std r_1 {:.4} at {early} -> {:.4} at {late}, ratio {:.3}, {:?}",
            e.std_early,
            e.std_late,
            e.std_ratio.unwrap_or(f64::NAN),
            e.verdict
        );
    }
    Ok(())
}
