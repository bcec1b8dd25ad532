// Minimal polynomial of odd degree: factors U, V from the theta quotient,
// checked through the Pell identity and the orthogonality conditions.
//
//     cargo run --example odd_degree

use akhiezer::frame::TwoIntervalSet;
use akhiezer::functional::l1_norm;
use akhiezer::synthesis::solve;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let set = TwoIntervalSet::new(-0.3, 0.4)?;
    let solution = solve(set, 5)?;
    println!("case: {} (p = {})", solution.case.branch.label(), solution.case.p);
    println!("f(x) coefficients, highest first: {:?}", solution.f.descending());
    println!("zeros: {:?}", solution.zeros);
    if let Some(pair) = &solution.factors {
        println!("U = {:?}", pair.u.descending());
        println!("V = {:?}", pair.v.descending());
        println!("{:?}: A = {:.6}, B = {:.6}, excess {:.1e}", pair.pell.form, pair.pell.a, pair.pell.b, pair.pell.excess);
    }
    println!("moment residuals: {:.1e}", solution.max_moment_residual());
    println!("minimal value: {:.15}", solution.minimal_value);

    // Any other monic quintic does worse.
    let mut nudged = solution.f.coeffs().to_vec();
    nudged[2] += 1e-3;
    let other = akhiezer::poly::MonicPolynomial::from_coeffs(&nudged)?;
    println!("perturbed value: {:.15}", l1_norm(&other, &set)?.value);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
