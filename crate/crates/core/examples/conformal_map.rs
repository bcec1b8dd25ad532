// The elliptic parametrization x(u) of E = [-1, alpha] ∪ [beta, 1] and the
// case selection for each degree.
//
//     cargo run --example conformal_map

use akhiezer::frame::{build_frame, Sheet, TwoIntervalSet};
use num_complex::Complex64;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let set = TwoIntervalSet::new(-0.3, 0.4)?;
    let frame = build_frame(set)?;
    let (kk, kp) = (frame.quarter(), frame.quarter_prime());
    println!("alpha = {}, beta = {}", set.alpha, set.beta);
    println!("k = {:.15}, K = {:.15}, K' = {:.15}, rho = {:.15}", frame.modulus.k, kk, kp, frame.rho);
    println!("frame residuals: {:.1e}", frame.residuals.max());

    println!("corners of the rectangle:");
    for (name, u) in [
        ("0", Complex64::new(0.0, 0.0)),
        ("iK'", Complex64::new(0.0, kp)),
        ("K + iK'", Complex64::new(kk, kp)),
        ("K", Complex64::new(kk, 0.0)),
    ] {
        let x = frame.map_x(u)?;
        println!("  x({name}) = {:.15}", x.re);
    }

    println!("round trips through the inverse map:");
    for x in [-0.9, -0.5, -0.3, 0.0, 0.4, 0.75, 1.5, -3.0] {
        let u = frame.inverse_map(x, Sheet::Upper)?;
        let back = frame.map_x(u)?;
        println!("  x = {x:5}: u = {u:.6}, |x(u) - x| = {:.1e}", (back - x).norm());
    }

    println!("cases:");
    for degree in 1..=8 {
        let case = frame.classify_case(degree);
        println!(
            "  n = {degree}: p = {}, sigma/K = {:.6}, {} (zeros {:?})",
            case.p,
            case.sigma_over_k,
            case.branch.label(),
            case.zero_split()
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
