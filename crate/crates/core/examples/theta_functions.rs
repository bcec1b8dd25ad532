// The four theta functions H, H1, Theta, Theta1 and their relation to sn.
//
//     cargo run --example theta_functions

use akhiezer::elliptic::{jacobi_sn_cn_dn, Modulus, QuarterPeriods};
use akhiezer::theta::{theta, theta_h, theta_theta, Nome, ThetaKind};
use num_complex::Complex64;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let modulus = Modulus::new(0.8)?;
    let periods = QuarterPeriods::of(&modulus)?;
    let nome = Nome::from_periods(&periods)?;
    println!("k = 0.8, q = {:.15}", nome.q);

    let u = Complex64::new(0.3, 0.2);
    for kind in [ThetaKind::H, ThetaKind::H1, ThetaKind::Theta, ThetaKind::Theta1] {
        let t = theta(kind, u, &nome)?;
        println!("{kind:?}(0.3 + 0.2i) = {:.15} (tail bound {:.1e})", t.value, t.truncation_bound);
    }

    // sn = H / (sqrt(k) Theta)
    let ratio = theta_h(u, &nome)?.value / (modulus.k.sqrt() * theta_theta(u, &nome)?.value);
    let (sn, _, _) = jacobi_sn_cn_dn(u, &modulus)?;
    println!("H / (sqrt k Theta) - sn = {:.1e}", (ratio - sn).norm());

    // Theta(u + 2K) = Theta(u), H(u + 2K) = -H(u).
    let shift = Complex64::new(2.0 * periods.real, 0.0);
    let theta_shift = theta_theta(u + shift, &nome)?.value - theta_theta(u, &nome)?.value;
    let h_shift = theta_h(u + shift, &nome)?.value + theta_h(u, &nome)?.value;
    println!("period 2K residuals: Theta {:.1e}, H {:.1e}", theta_shift.norm(), h_shift.norm());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
