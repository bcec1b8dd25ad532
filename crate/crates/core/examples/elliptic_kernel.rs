// Jacobi elliptic functions and complete integrals for a few moduli.
//
//     cargo run --example elliptic_kernel

use akhiezer::elliptic::{inverse_sn, jacobi_sn_cn_dn, sn_cn_dn_real, Modulus, QuarterPeriods};
use num_complex::Complex64;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    for k in [0.1, 0.5, 0.9, 0.999] {
        let modulus = Modulus::new(k)?;
        let periods = QuarterPeriods::of(&modulus)?;
        println!("k = {k}: K = {:.15}, K' = {:.15}", periods.real, periods.imaginary);

        let u = 0.37 * periods.real;
        let (sn, cn, dn) = sn_cn_dn_real(u, &modulus)?;
        let pythagoras = (sn * sn + cn * cn - 1.0).abs();
        let modular = (dn * dn + modulus.k2 * sn * sn - 1.0).abs();
        println!("  sn, cn, dn at 0.37 K: {sn:.15} {cn:.15} {dn:.15}");
        println!("  identity residuals: {pythagoras:.1e} {modular:.1e}");

        let back = inverse_sn(sn, &modulus)?;
        println!("  inverse_sn(sn(u)) - u = {:.1e}", back - u);

        // sn has a pole at iK'; halfway there it is still finite.
        let z = Complex64::new(0.25 * periods.real, 0.5 * periods.imaginary);
        let (s, c, d) = jacobi_sn_cn_dn(z, &modulus)?;
        println!("  sn(K/4 + iK'/2) = {s:.12}, residual {:.1e}", (s * s + c * c - 1.0).norm().max((d * d + modulus.k2 * s * s - 1.0).norm()));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
