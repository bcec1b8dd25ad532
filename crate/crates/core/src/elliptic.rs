//! Complete elliptic integrals and Jacobi elliptic functions.
//!
//! `K(k)` comes from the arithmetic-geometric mean, `sn`, `cn`, `dn` from the
//! descending Landen (AGM) scheme followed by the trigonometric closed form.
//! Complex arguments are assembled from the real-axis values with modulus `k`
//! and the imaginary-axis values with modulus `k'` via the addition theorem.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Absolute tolerance shared by every iterative loop in this module.
pub const ITER_TOL: f64 = 1e-15;
/// AGM iteration cap.
pub const AGM_CAP: usize = 40;
/// Descending Landen depth cap.
pub const LANDEN_CAP: usize = 32;
/// Moduli closer than this to 0 or 1 are rejected.
pub const MODULUS_MARGIN: f64 = 1e-12;

const POLE_RADIUS: f64 = 1e-10;

/// Modulus `k` of the Jacobi functions together with `k^2` and the
/// complementary modulus `k' = sqrt(1 - k^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    pub k: f64,
    pub k2: f64,
    pub kprime: f64,
    pub kprime2: f64,
}

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Domain {
                what: "modulus k",
                value: k,
                expected: "(0, 1)",
            });
        }
        let kprime2 = (1.0 - k) * (1.0 + k);
        Self::checked(k, k * k, kprime2.sqrt(), kprime2)
    }

    /// Builds the modulus from `k^2` and `k'^2` computed independently, which
    /// keeps full relative precision in `k'` when `k` is close to 1.
    pub fn from_squares(k2: f64, kprime2: f64) -> Result<Self> {
        if !(k2 > 0.0 && kprime2 > 0.0) || (k2 + kprime2 - 1.0).abs() > 1e-14 {
            return Err(Error::Domain {
                what: "modulus k^2",
                value: k2,
                expected: "(0, 1) with k^2 + k'^2 = 1",
            });
        }
        Self::checked(k2.sqrt(), k2, kprime2.sqrt(), kprime2)
    }

    fn checked(k: f64, k2: f64, kprime: f64, kprime2: f64) -> Result<Self> {
        if k < MODULUS_MARGIN || 1.0 - k < MODULUS_MARGIN {
            return Err(Error::DegenerateGeometry { k });
        }
        Ok(Self {
            k,
            k2,
            kprime,
            kprime2,
        })
    }

    /// The complementary modulus `k'`.
    pub fn complement(&self) -> Self {
        Self {
            k: self.kprime,
            k2: self.kprime2,
            kprime: self.k,
            kprime2: self.k2,
        }
    }
}

/// Real and imaginary quarter-periods `K(k)` and `K'(k) = K(k')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarterPeriods {
    pub real: f64,
    pub imaginary: f64,
}

impl QuarterPeriods {
    pub fn of(modulus: &Modulus) -> Result<Self> {
        Ok(Self {
            real: complete_k(modulus)?,
            imaginary: complete_k(&modulus.complement())?,
        })
    }
}

fn agm(mut a: f64, mut b: f64) -> Result<f64> {
    for _ in 0..AGM_CAP {
        if (a - b).abs() <= ITER_TOL * a {
            return Ok(0.5 * (a + b));
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Err(Error::IterationCap {
        what: "AGM",
        cap: AGM_CAP,
    })
}

/// Complete elliptic integral of the first kind, `K(k) = pi / (2 AGM(1, k'))`.
pub fn complete_k(modulus: &Modulus) -> Result<f64> {
    Ok(FRAC_PI_2 / agm(1.0, modulus.kprime)?)
}

/// `(sn u, cn u, dn u)` for real `u`.
pub fn sn_cn_dn_real(u: f64, modulus: &Modulus) -> Result<(f64, f64, f64)> {
    if !u.is_finite() {
        return Err(Error::Domain {
            what: "argument u",
            value: u,
            expected: "finite reals",
        });
    }
    let quarter = complete_k(modulus)?;
    let period = 4.0 * quarter;
    let u = u - period * (u / period).round();

    let mut a = vec![1.0];
    let mut c = vec![modulus.k];
    let mut b = modulus.kprime;
    while c.last().unwrap().abs() > ITER_TOL {
        if a.len() > LANDEN_CAP {
            return Err(Error::IterationCap {
                what: "descending Landen",
                cap: LANDEN_CAP,
            });
        }
        let an = *a.last().unwrap();
        a.push(0.5 * (an + b));
        c.push(0.5 * (an - b));
        b = (an * b).sqrt();
    }
    let depth = a.len() - 1;
    let mut phi = 2f64.powi(depth as i32) * a[depth] * u;
    for n in (1..=depth).rev() {
        let s = (c[n] / a[n] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + s.asin());
    }
    let (sn, cn) = phi.sin_cos();
    // 1 - k^2 sn^2 = k'^2 + k^2 cn^2, free of cancellation; dn > 0 on the real axis.
    let dn = (modulus.kprime2 + modulus.k2 * cn * cn).sqrt();
    Ok((sn, cn, dn))
}

/// `(sn u, cn u, dn u)` for complex `u`.
///
/// The argument is first reduced into `(-2K, 2K] x (-K', K']`. Arguments
/// within `1e-10` of the pole lattice `iK' + 2K Z + 2iK' Z` are rejected.
pub fn jacobi_sn_cn_dn(
    u: Complex64,
    modulus: &Modulus,
) -> Result<(Complex64, Complex64, Complex64)> {
    if !(u.re.is_finite() && u.im.is_finite()) {
        return Err(Error::Domain {
            what: "argument u",
            value: u.norm(),
            expected: "finite complex numbers",
        });
    }
    let periods = QuarterPeriods::of(modulus)?;
    let (kk, kp) = (periods.real, periods.imaginary);

    // sn(u + 2iK') = sn u, cn and dn change sign.
    let shifts = ((u.im + kp) / (2.0 * kp)).floor() - if u.im + kp == 0.0 { 1.0 } else { 0.0 };
    let y = u.im - 2.0 * kp * shifts;
    let flip = if (shifts as i64).rem_euclid(2) == 1 {
        -1.0
    } else {
        1.0
    };
    let x = u.re - 4.0 * kk * (u.re / (4.0 * kk)).round();

    for pole_x in [-2.0 * kk, 0.0, 2.0 * kk] {
        for pole_y in [-kp, kp] {
            if (x - pole_x).hypot(y - pole_y) < POLE_RADIUS {
                return Err(Error::PoleProximity { re: u.re, im: u.im });
            }
        }
    }

    let (s, c, d) = sn_cn_dn_real(x, modulus)?;
    if y == 0.0 {
        return Ok((
            Complex64::new(s, 0.0),
            Complex64::new(flip * c, 0.0),
            Complex64::new(flip * d, 0.0),
        ));
    }
    let (s1, c1, d1) = sn_cn_dn_real(y, &modulus.complement())?;
    let k2 = modulus.k2;
    let denom = c1 * c1 + k2 * s * s * s1 * s1;
    let sn = Complex64::new(s * d1, c * d * s1 * c1) / denom;
    let cn = Complex64::new(c * c1, -s * d * s1 * d1) / denom;
    let dn = Complex64::new(d * c1 * d1, -k2 * s * c * s1) / denom;
    Ok((sn, flip * cn, flip * dn))
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
pub fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> Result<f64> {
    const ERRTOL: f64 = 0.0025;
    for _ in 0..AGM_CAP {
        let mean = (x + y + z) / 3.0;
        let dx = 1.0 - x / mean;
        let dy = 1.0 - y / mean;
        let dz = 1.0 - z / mean;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return Ok((1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / mean.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
    Err(Error::IterationCap {
        what: "Carlson R_F",
        cap: AGM_CAP,
    })
}

/// Inverse of `sn` on `[0, K]`: the `u` with `sn(u, k) = s`.
pub fn inverse_sn(s: f64, modulus: &Modulus) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain {
            what: "sn value",
            value: s,
            expected: "[0, 1]",
        });
    }
    let quarter = complete_k(modulus)?;
    if s == 1.0 {
        return Ok(quarter);
    }
    let c2 = (1.0 - s) * (1.0 + s);
    let mut u = s * carlson_rf(c2, modulus.kprime2 + modulus.k2 * c2, 1.0)?;
    // One Newton step where the slope cn*dn is not tiny.
    let (sn, cn, dn) = sn_cn_dn_real(u, modulus)?;
    let slope = cn * dn;
    if slope > 1e-6 {
        u -= (sn - s) / slope;
    }
    Ok(u.clamp(0.0, quarter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn modulus_sq(k2: f64) -> Modulus {
        Modulus::from_squares(k2, 1.0 - k2).unwrap()
    }

    /// K by the trapezoid rule on the periodic integrand; spectrally accurate.
    fn k_by_quadrature(k2: f64) -> f64 {
        let n = 400;
        let h = FRAC_PI_2 / n as f64;
        (0..=n)
            .map(|i| {
                let t = i as f64 * h;
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w / (1.0 - k2 * t.sin().powi(2)).sqrt()
            })
            .sum::<f64>()
            * h
    }

    #[test]
    fn complete_k_small_modulus_limit() {
        let k = complete_k(&Modulus::new(1e-12).unwrap()).unwrap();
        assert!((k - FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn complete_k_reference_values() {
        let half = complete_k(&modulus_sq(0.5)).unwrap();
        assert_relative_eq!(half, 1.854_074_677_301_371_9, max_relative = 1e-14);
        assert_relative_eq!(half, k_by_quadrature(0.5), max_relative = 1e-14);

        let eight_ninths = complete_k(&modulus_sq(8.0 / 9.0)).unwrap();
        assert_relative_eq!(eight_ninths, 2.528_625_532_218_894, max_relative = 1e-14);
        assert_relative_eq!(eight_ninths, k_by_quadrature(8.0 / 9.0), max_relative = 1e-13);
    }

    #[test]
    fn modulus_rejects_out_of_range() {
        assert!(matches!(Modulus::new(0.0), Err(Error::Domain { .. })));
        assert!(matches!(Modulus::new(1.0), Err(Error::Domain { .. })));
        assert!(matches!(Modulus::new(1e-13), Err(Error::DegenerateGeometry { .. })));
        assert!(matches!(
            Modulus::new(1.0 - 1e-13),
            Err(Error::DegenerateGeometry { .. })
        ));
    }

    #[test]
    fn quarter_period_values() {
        let m = modulus_sq(8.0 / 9.0);
        let (s, c, d) = sn_cn_dn_real(complete_k(&m).unwrap(), &m).unwrap();
        assert!((s - 1.0).abs() < 1e-15);
        assert!(c.abs() < 1e-15);
        assert!((d - m.kprime).abs() < 1e-14, "{d} vs {}", m.kprime);
        let (s, c, d) = sn_cn_dn_real(0.0, &m).unwrap();
        assert_eq!((s, c, d), (0.0, 1.0, 1.0));
    }

    #[test]
    fn half_period_closed_form() {
        // sn(K/2) = 1/sqrt(1 + k')
        let m = modulus_sq(8.0 / 9.0);
        let kk = complete_k(&m).unwrap();
        let (s, c, d) = sn_cn_dn_real(0.5 * kk, &m).unwrap();
        assert!((s - (1.0 / (1.0 + m.kprime)).sqrt()).abs() < 1e-15);
        assert!((s * s + c * c - 1.0).abs() < 1e-12);
        assert!((d * d + m.k2 * s * s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_reference_values() {
        let m = modulus_sq(0.3);
        let (s, c, d) = jacobi_sn_cn_dn(Complex64::new(0.7, 0.0), &m).unwrap();
        assert!((s.re - 0.632_304_776_310_864_5).abs() < 1e-14);
        assert!((c.re - 0.774_719_736_326_929_8).abs() < 1e-14);
        assert!((d.re - 0.938_113_639_681_430_2).abs() < 1e-14);

        let m = modulus_sq(0.6);
        let (s, c, d) = jacobi_sn_cn_dn(Complex64::new(0.4, 0.9), &m).unwrap();
        assert!((s - Complex64::new(0.705_696_957_564_190_4, 0.913_564_954_016_283_7)).norm() < 1e-13);
        assert!((c - Complex64::new(1.263_675_163_659_381_4, -0.510_178_586_338_298_3)).norm() < 1e-13);
        assert!((d - Complex64::new(1.147_032_428_083_848_4, -0.337_235_457_063_869_4)).norm() < 1e-13);
    }

    #[test]
    fn pole_is_rejected() {
        let m = modulus_sq(0.5);
        let p = QuarterPeriods::of(&m).unwrap();
        let at_pole = Complex64::new(0.0, p.imaginary);
        assert!(matches!(
            jacobi_sn_cn_dn(at_pole, &m),
            Err(Error::PoleProximity { .. })
        ));
        let shifted = Complex64::new(2.0 * p.real, 3.0 * p.imaginary);
        assert!(jacobi_sn_cn_dn(shifted, &m).is_err());
        assert!(jacobi_sn_cn_dn(at_pole + Complex64::new(1e-6, 0.0), &m).is_ok());
    }

    #[test]
    fn inverse_sn_endpoints_and_interior() {
        let m = modulus_sq(8.0 / 9.0);
        let kk = complete_k(&m).unwrap();
        assert_eq!(inverse_sn(0.0, &m).unwrap(), 0.0);
        assert_eq!(inverse_sn(1.0, &m).unwrap(), kk);
        let target = 3f64.sqrt() / 2.0;
        let u = inverse_sn(target, &m).unwrap();
        assert!((sn_cn_dn_real(u, &m).unwrap().0 - target).abs() < 1e-12);
        // Bisection oracle on sn over [0, K].
        let (mut lo, mut hi) = (0.0, kk);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if sn_cn_dn_real(mid, &m).unwrap().0 < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((u - 0.5 * (lo + hi)).abs() < 1e-12);
        // and the closed form: sn(K/2) = sqrt(3)/2 for k' = 1/3
        assert!((u - 0.5 * kk).abs() < 1e-12);
        assert!(inverse_sn(1.5, &m).is_err());
        assert!(inverse_sn(-0.1, &m).is_err());
    }
}
