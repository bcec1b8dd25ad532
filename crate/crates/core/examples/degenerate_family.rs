// On a ladder rung the minimizer is not unique: every (x - theta) phi with
// theta in the gap has the same value 4 tau^(2m+2).
//
//     cargo run --example degenerate_family

use akhiezer::frame::{beta_ladder, build_frame, TwoIntervalSet};
use akhiezer::functional::{bernstein_degenerate_check, closed_form_degenerate_value, l1_norm};
use akhiezer::synthesis::solve;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let (alpha, m) = (-0.3, 2);
    let ladder = beta_ladder(alpha, m)?;
    let beta = ladder.rungs[1].beta;
    let set = TwoIntervalSet::new(alpha, beta)?;
    let frame = build_frame(set)?;
    let solution = solve(set, 2 * m + 1)?;
    let family = solution.family.as_ref().ok_or("expected a degenerate frame")?;
    println!("alpha = {alpha}, beta = {beta:.15}, sigma/K = {:.1e}", solution.case.sigma_over_k);
    println!("gamma = {:.15}, tau = {:.15}", family.gamma, family.tau);

    let closed = closed_form_degenerate_value(m, &frame)?;
    println!("4 tau^N = {:.15}, B forms agree to {:.1e}", closed.value, closed.b_agreement());
    for theta in [alpha, 0.5 * (alpha + beta), family.gamma, beta] {
        let member = family.member(theta);
        println!("  theta = {theta:.6}: value {:.15}", l1_norm(&member, &set)?.value);
    }

    let bernstein = bernstein_degenerate_check(family, &frame);
    println!("weighted sup {:.15} vs half value {:.15}", bernstein.sup, bernstein.target);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
