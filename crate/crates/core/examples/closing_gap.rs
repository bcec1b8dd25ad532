// As the gap closes the minimal value tends to 2^(1-n), the value for the
// single interval [-1, 1].
//
//     cargo run --example closing_gap

use akhiezer::frame::TwoIntervalSet;
use akhiezer::functional::single_interval_value;
use akhiezer::synthesis::solve;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    for width in [1e-1, 1e-2, 1e-3, 1e-4] {
        let set = TwoIntervalSet::new(0.1, 0.1 + width)?;
        let row: Vec<String> = (1..=6)
            .map(|n| {
                let v = solve(set, n)?.minimal_value;
                Ok(format!("{:+.1e}", v / single_interval_value(n) - 1.0))
            })
            .collect::<akhiezer::Result<_>>()?;
        println!("gap {width:.0e}: {}", row.join(" "));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
