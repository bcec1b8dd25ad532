// Even degrees on sets on either side of a change of branch.
//
//     cargo run --example even_degree

use akhiezer::frame::TwoIntervalSet;
use akhiezer::synthesis::solve;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    for (alpha, beta) in [(-0.3, 0.4), (-0.6, 0.1), (0.2, 0.7)] {
        let set = TwoIntervalSet::new(alpha, beta)?;
        for degree in [2, 4, 6] {
            let s = solve(set, degree)?;
            let form = s.factors.as_ref().map(|p| format!("{:?}", p.pell.form)).unwrap_or_default();
            println!(
                "[-1, {alpha}] ∪ [{beta}, 1], n = {degree}: {} {form}, value {:.12}, excess {:.1e}, zeros {:?}",
                s.case.branch.label(),
                s.minimal_value,
                s.pell_excess().unwrap_or(f64::NAN),
                s.zeros.iter().map(|z| format!("{z:.6}")).collect::<Vec<_>>()
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
