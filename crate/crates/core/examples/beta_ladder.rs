// Values of beta where degree 2m + 1 is degenerate, and the branch that
// holds between consecutive rungs.
//
//     cargo run --example beta_ladder

use akhiezer::frame::{beta_ladder, build_frame, TwoIntervalSet};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = -0.3;
    for m in 1..=4 {
        let ladder = beta_ladder(alpha, m)?;
        println!("m = {m}:");
        for rung in &ladder.rungs {
            let case = build_frame(TwoIntervalSet::new(alpha, rung.beta)?)?.classify_case(2 * m + 1);
            println!("  p = {}: beta = {:.15}, k = {:.12}, sigma/K after rebuild {:.1e}", rung.p, rung.beta, rung.k, case.sigma_over_k.min(1.0 - case.sigma_over_k));
        }
        for band in ladder.bands() {
            println!("  ({:.6}, {:.6}) {}", band.lower, band.upper, band.branch.label());
        }
        if !ladder.unresolved.is_empty() {
            println!("  unresolved p: {:?}", ladder.unresolved);
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
