// Bounds from the neighbouring ladder rungs and the theta-power estimate
// of the minimal value as the degree grows.
//
//     cargo run --example asymptotics

use akhiezer::frame::{build_frame, TwoIntervalSet};
use akhiezer::functional::{asymptotic_g, sandwich_bounds};
use akhiezer::synthesis::solve;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let set = TwoIntervalSet::new(-0.3, 0.4)?;
    let frame = build_frame(set)?;
    println!("   m  lower            value            upper            estimate error");
    for m in 1..=8 {
        let value = solve(set, 2 * m + 1)?.minimal_value;
        let bounds = sandwich_bounds(&set, m)?;
        let estimate = asymptotic_g(m, &frame)?;
        println!(
            "  {m:2}  {:.10e} {:.10e} {:.10e} {:+.2e}",
            bounds.lower,
            value,
            bounds.upper,
            (estimate - value) / value
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
