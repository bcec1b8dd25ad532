// Check the construction against a direct numerical minimization.
//
//     cargo run --release --example oracle_certify

use akhiezer::frame::TwoIntervalSet;
use akhiezer::oracle::{certify, CertifyTolerance, OracleConfig};
use akhiezer::synthesis::solve;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = OracleConfig::default();
    let tol = CertifyTolerance::default();
    for (alpha, beta, degree) in [(-0.3, 0.4, 3), (-0.3, 0.4, 4), (0.2, 0.7, 7), (-0.5, 0.5, 5)] {
        let solution = solve(TwoIntervalSet::new(alpha, beta)?, degree)?;
        let report = certify(&solution, &cfg, &tol)?;
        println!(
            "[-1, {alpha}] ∪ [{beta}, 1], n = {degree} ({}): value gap {:.1e}, root distance {:.1e}, oracle settled to {:.1e}",
            solution.case.branch.label(),
            report.value_gap,
            report.root_distance,
            report.oracle.certified_gap
        );
        if let Some(zero) = report.oracle_gap_zero {
            println!("  oracle put its free zero at {zero:.6}");
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
