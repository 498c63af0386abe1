//! One simulation at exponent 2 with checkpoints, printing the low-degree
//! proportions and the edge count.

use parid::process::{run, ParidConfig, Truncation};
use parid::theory::b_k;

fn main() -> parid::Result<()> {
    let cfg = ParidConfig::power_law(2.0, Truncation::HorizonAlphaEq2, 1_000_000)
        .with_seed(42)
        .with_checkpoints(vec![1_000, 10_000, 100_000]);
    let out = run(&cfg)?;
    for (seq, trace) in out.checkpoints.iter().chain([&out.final_sequence]).zip(&out.edge_trace) {
        println!(
            "t = {:>8}: L = {:>9}, r_1 = {:.4}, r_2 = {:.4}, r_3 = {:.4}",
            seq.t,
            trace.edges,
            seq.proportion(1),
            seq.proportion(2),
            seq.proportion(3)
        );
    }
    println!("limit:          b_1 = {:.4}, b_2 = {:.4}, b_3 = {:.4}", b_k(1), b_k(2), b_k(3));
    Ok(())
}
