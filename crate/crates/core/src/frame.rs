//! The elliptic parameterization of `E = [-1, alpha] ∪ [beta, 1]`.
//!
//! With modulus `k^2 = 2(beta - alpha) / ((1 - alpha)(1 + beta))` and `rho`
//! fixed by `alpha = 1 - 2 sn^2 rho`, the map
//!
//! ```text
//! x(u) = (sn^2 u cn^2 rho + cn^2 u sn^2 rho) / (sn^2 u - sn^2 rho)
//! ```
//!
//! takes the boundary of the rectangle `[0, K] x [0, K']` onto the real line:
//!
//! | segment            | image                      |
//! |--------------------|----------------------------|
//! | `u in [0, rho)`    | `(-inf, -1]`, decreasing   |
//! | `u = it`           | `[-1, alpha]`, increasing  |
//! | `u = s + iK'`      | `[alpha, beta]`            |
//! | `u = K + it`       | `[beta, 1]`, decreasing    |
//! | `u in (rho, K]`    | `[1, inf)`                 |

use log::debug;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::elliptic::{inverse_sn, jacobi_sn_cn_dn, sn_cn_dn_real, Modulus, QuarterPeriods};
use crate::error::{Error, Result};
use crate::theta::Nome;

/// Relative width around `sigma = 0` and `sigma = K` treated as degenerate.
pub const DEGENERACY_RTOL: f64 = 1e-9;

const POLE_RTOL: f64 = 1e-10;
const BISECTION_CAP: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoIntervalSet {
    pub alpha: f64,
    pub beta: f64,
}

impl TwoIntervalSet {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let ok = alpha.is_finite() && beta.is_finite() && -1.0 < alpha && alpha < beta && beta < 1.0;
        if !ok {
            return Err(Error::InvalidSet { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// The two closed intervals, left first.
    pub fn pieces(&self) -> [(f64, f64); 2] {
        [(-1.0, self.alpha), (self.beta, 1.0)]
    }

    pub fn measure(&self) -> f64 {
        (self.alpha + 1.0) + (1.0 - self.beta)
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        (x >= -1.0 - slack && x <= self.alpha + slack) || (x >= self.beta - slack && x <= 1.0 + slack)
    }

    pub fn is_symmetric(&self) -> bool {
        (self.alpha + self.beta).abs() <= 4.0 * f64::EPSILON
    }
}

/// Build-time consistency residuals of a frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameResiduals {
    /// `|k^2 - 2(beta - alpha)/((1 - alpha)(1 + beta))|`
    pub modulus: f64,
    /// `|alpha - (1 - 2 sn^2 rho)|`
    pub alpha: f64,
    /// `|beta - (2 cn^2 rho / dn^2 rho - 1)|`
    pub beta: f64,
}

impl FrameResiduals {
    pub fn max(&self) -> f64 {
        self.modulus.max(self.alpha).max(self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticFrame {
    pub set: TwoIntervalSet,
    pub modulus: Modulus,
    pub periods: QuarterPeriods,
    pub nome: Nome,
    pub rho: f64,
    pub sn_rho: f64,
    pub cn_rho: f64,
    pub dn_rho: f64,
    pub residuals: FrameResiduals,
}

/// Which sheet of the two-sheeted surface a point of the real line is lifted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    Upper,
    Lower,
}

/// The four factors `x + 1`, `x - alpha`, `x - beta`, `x - 1` in elliptic form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorForms {
    pub plus_one: Complex64,
    pub minus_alpha: Complex64,
    pub minus_beta: Complex64,
    pub minus_one: Complex64,
}

pub fn build_frame(set: TwoIntervalSet) -> Result<EllipticFrame> {
    let (a, b) = (set.alpha, set.beta);
    let denom = (1.0 - a) * (1.0 + b);
    let k2 = 2.0 * (b - a) / denom;
    let kprime2 = (1.0 - b) * (1.0 + a) / denom;
    let modulus = Modulus::from_squares(k2, kprime2)?;
    let periods = QuarterPeriods::of(&modulus)?;
    let nome = Nome::from_periods(&periods)?;

    let rho = inverse_sn(((1.0 - a) / 2.0).sqrt(), &modulus)?;
    let (sn_rho, cn_rho, dn_rho) = sn_cn_dn_real(rho, &modulus)?;
    let residuals = FrameResiduals {
        modulus: (modulus.k2 - k2).abs(),
        alpha: (a - (1.0 - 2.0 * sn_rho * sn_rho)).abs(),
        beta: (b - (2.0 * cn_rho * cn_rho / (dn_rho * dn_rho) - 1.0)).abs(),
    };
    debug!(
        "frame alpha={a} beta={b}: k^2={k2:e} K={} K'={} q={:e} rho={rho} residual={:e}",
        periods.real,
        periods.imaginary,
        nome.q,
        residuals.max()
    );
    Ok(EllipticFrame {
        set,
        modulus,
        periods,
        nome,
        rho,
        sn_rho,
        cn_rho,
        dn_rho,
        residuals,
    })
}

impl EllipticFrame {
    pub fn quarter(&self) -> f64 {
        self.periods.real
    }

    pub fn quarter_prime(&self) -> f64 {
        self.periods.imaginary
    }

    pub fn sn_cn_dn(&self, u: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
        jacobi_sn_cn_dn(u, &self.modulus)
    }

    /// `(1 - alpha^2) / 2 = 2 sn^2 rho cn^2 rho`
    fn half_width(&self) -> f64 {
        2.0 * self.sn_rho * self.sn_rho * self.cn_rho * self.cn_rho
    }

    /// `x(u)`, evaluated as `alpha + 2 sn^2 rho cn^2 rho / (sn^2 u - sn^2 rho)`.
    ///
    /// Close to the line `Im u = K'` the shifted form with `sn(u) = 1/(k sn(u - iK'))`
    /// is used instead.
    pub fn map_x(&self, u: Complex64) -> Result<Complex64> {
        let kp = self.quarter_prime();
        let y = u.im.rem_euclid(2.0 * kp);
        let s2r = self.sn_rho * self.sn_rho;
        let k2 = self.modulus.k2;
        let (numer, denom) = if (y - kp).abs() < 0.5 * kp {
            let (sw, _, _) = self.sn_cn_dn(u - Complex64::new(0.0, kp))?;
            let sw2 = sw * sw;
            (self.half_width() * k2 * sw2, 1.0 - k2 * s2r * sw2)
        } else {
            let (s, _, _) = self.sn_cn_dn(u)?;
            (Complex64::new(self.half_width(), 0.0), s * s - s2r)
        };
        if denom.norm() < POLE_RTOL * numer.norm().max(f64::MIN_POSITIVE) {
            return Err(Error::PoleProximity { re: u.re, im: u.im });
        }
        Ok(self.set.alpha + numer / denom)
    }

    /// `x(u)` for real `u`, where the image is real.
    pub fn map_x_real(&self, u: f64) -> Result<f64> {
        let (s, _, _) = sn_cn_dn_real(u, &self.modulus)?;
        let denom = s * s - self.sn_rho * self.sn_rho;
        if denom.abs() < POLE_RTOL * self.half_width() {
            return Err(Error::PoleProximity { re: u, im: 0.0 });
        }
        Ok(self.set.alpha + self.half_width() / denom)
    }

    /// `dx/du = -(1 - alpha^2) sn u cn u dn u / (sn^2 u - sn^2 rho)^2`.
    pub fn map_derivative(&self, u: Complex64) -> Result<Complex64> {
        let (s, c, d) = self.sn_cn_dn(u)?;
        let denom = s * s - self.sn_rho * self.sn_rho;
        Ok(-2.0 * self.half_width() * s * c * d / (denom * denom))
    }

    /// The factors of `x(u)` against the four branch points, each in closed form.
    pub fn factor_forms(&self, u: Complex64) -> Result<FactorForms> {
        let (s, c, d) = self.sn_cn_dn(u)?;
        let (a, b) = (self.set.alpha, self.set.beta);
        let (sr, cr, dr) = (self.sn_rho, self.cn_rho, self.dn_rho);
        let denom = s * s - sr * sr;
        Ok(FactorForms {
            plus_one: 2.0 * s * s * cr * cr / denom,
            minus_alpha: (1.0 - a * a) / (2.0 * denom),
            minus_beta: (1.0 - b * b) * d * d * dr * dr / (2.0 * self.modulus.kprime2 * denom),
            minus_one: 2.0 * sr * sr * c * c / denom,
        })
    }

    /// A preimage of real `x` on the boundary of the fundamental rectangle.
    ///
    /// `Sheet::Lower` returns `-u`, the matching point on the other sheet.
    pub fn inverse_map(&self, x: f64, sheet: Sheet) -> Result<Complex64> {
        if !x.is_finite() {
            return Err(Error::Domain {
                what: "x",
                value: x,
                expected: "finite reals",
            });
        }
        let (kk, kp) = (self.quarter(), self.quarter_prime());
        let (a, b) = (self.set.alpha, self.set.beta);
        let u = if x <= -1.0 {
            self.invert_real(x, 0.0, self.rho)?
        } else if x >= 1.0 {
            self.invert_real(x, self.rho, kk)?
        } else if x <= a {
            self.invert_segment(x, Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0), kp)?
        } else if x >= b {
            self.invert_segment(x, Complex64::new(kk, 0.0), Complex64::new(0.0, 1.0), kp)?
        } else {
            self.invert_segment(x, Complex64::new(0.0, kp), Complex64::new(1.0, 0.0), kk)?
        };
        Ok(match sheet {
            Sheet::Upper => u,
            Sheet::Lower => -u,
        })
    }

    fn invert_real(&self, x: f64, lo: f64, hi: f64) -> Result<Complex64> {
        let pole_side = if lo < self.rho {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
        let t = bisect_monotone(
            |t| match self.map_x_real(t) {
                Err(Error::PoleProximity { .. }) => Ok(pole_side),
                other => other,
            },
            x,
            lo,
            hi,
        )?;
        Ok(Complex64::new(t, 0.0))
    }

    /// Solve `Re x(origin + t direction) = x` for `t in [0, length]`.
    fn invert_segment(
        &self,
        x: f64,
        origin: Complex64,
        direction: Complex64,
        length: f64,
    ) -> Result<Complex64> {
        let at = |t: f64| origin + direction * t;
        let t = bisect_monotone(|t| Ok(self.map_x(at(t))?.re), x, 0.0, length)?;
        // One Newton step, kept only if it improves the residual.
        let u = at(t);
        if let Ok(deriv) = self.map_derivative(u) {
            let slope = (deriv * direction).re;
            let current = self.map_x(u)?.re - x;
            if slope.abs() > 1e-8 {
                let t_new = (t - current / slope).clamp(0.0, length);
                if let Ok(value) = self.map_x(at(t_new)) {
                    if (value.re - x).abs() < current.abs() {
                        return Ok(at(t_new));
                    }
                }
            }
        }
        Ok(u)
    }

    /// `(n + 1) rho = p K + sigma`, the case split that selects the closed form.
    pub fn classify_case(&self, degree: usize) -> CaseSelection {
        classify(degree, self.rho, self.quarter())
    }
}

/// Bisection for `g(t) = target` with `g` monotone on `[lo, hi]`, direction
/// detected from the end values.
fn bisect_monotone<G>(mut g: G, target: f64, mut lo: f64, mut hi: f64) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    let g_lo = g(lo)? - target;
    if g_lo == 0.0 {
        return Ok(lo);
    }
    let g_hi = g(hi)? - target;
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        // Endpoint targets can land a rounding error outside the image.
        let slack = 1e-13 * target.abs().max(1.0);
        if g_lo.abs() <= slack || g_hi.abs() <= slack {
            return Ok(if g_lo.abs() <= g_hi.abs() { lo } else { hi });
        }
        return Err(Error::NonConvergence {
            what: "inverse map (target not bracketed)",
        });
    }
    let increasing = g_hi > g_lo;
    for _ in 0..BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let v = g(mid)? - target;
        if v == 0.0 {
            return Ok(mid);
        }
        if (v > 0.0) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::IterationCap {
        what: "inverse map bisection",
        cap: BISECTION_CAP,
    })
}

/// Which closed form applies for a given degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Branch {
    /// `p` odd: built on `Theta`.
    OddP,
    /// `p` even: built on `Theta1`.
    EvenP,
    /// `sigma` at 0 or `K`: a one-parameter family of minimizers.
    Degenerate,
}

impl Branch {
    pub fn of_parity(p: usize) -> Self {
        if p % 2 == 1 {
            Branch::OddP
        } else {
            Branch::EvenP
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Branch::OddP => "odd-p",
            Branch::EvenP => "even-p",
            Branch::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseSelection {
    pub degree: usize,
    pub p: usize,
    /// In `[0, K)`.
    pub sigma: f64,
    pub sigma_over_k: f64,
    pub branch: Branch,
}

impl CaseSelection {
    /// `m` with `degree = 2m + 1` or `degree = 2m`.
    pub fn m(&self) -> usize {
        self.degree / 2
    }

    /// Number of zeros expected in `(-1, alpha)` and `(beta, 1)`. For the
    /// degenerate branch the remaining zero sits in `[alpha, beta]`.
    pub fn zero_split(&self) -> (usize, usize) {
        let left = self.degree - self.p.min(self.degree);
        match self.branch {
            Branch::Degenerate => (left, self.p.saturating_sub(1)),
            _ => (left, self.p),
        }
    }

    /// Index of the last zero left of the gap, counting from 1.
    pub fn gap_index(&self) -> usize {
        self.zero_split().0
    }
}

fn classify(degree: usize, rho: f64, quarter: f64) -> CaseSelection {
    let scaled = (degree as f64 + 1.0) * rho / quarter;
    let mut p = scaled.floor();
    let mut frac = scaled - p;
    let degenerate = frac.min(1.0 - frac) < DEGENERACY_RTOL;
    if degenerate && frac > 0.5 {
        p += 1.0;
        frac = 0.0;
    } else if degenerate {
        frac = 0.0;
    }
    let p = p as usize;
    let branch = if degenerate {
        Branch::Degenerate
    } else {
        Branch::of_parity(p)
    };
    CaseSelection {
        degree,
        p,
        sigma: frac * quarter,
        sigma_over_k: frac,
        branch,
    }
}

/// Case split from a raw `(rho, K)` pair; mostly useful for testing.
pub fn classify_case(degree: usize, rho: f64, quarter: f64) -> CaseSelection {
    classify(degree, rho, quarter)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderRung {
    pub p: usize,
    pub k: f64,
    pub kprime: f64,
    pub beta: f64,
    /// `|k^2 - 2(beta - alpha)/((1 - alpha)(1 + beta))|` after inverting.
    pub inversion_residual: f64,
}

/// An open interval of `beta` between two rungs, with the branch it selects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderBand {
    pub lower: f64,
    pub upper: f64,
    pub p: usize,
    pub branch: Branch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaLadder {
    pub alpha: f64,
    pub m: usize,
    /// Decreasing in `beta`; `p` increases along the list.
    pub rungs: Vec<LadderRung>,
    /// `p` values whose rung would need `k` outside the admissible band.
    pub unresolved: Vec<usize>,
}

impl BetaLadder {
    pub fn betas(&self) -> Vec<f64> {
        self.rungs.iter().map(|r| r.beta).collect()
    }

    /// Bands from `beta = 1` down to `beta = alpha`.
    pub fn bands(&self) -> Vec<LadderBand> {
        let mut upper = 1.0;
        let mut p = 0;
        let mut out = Vec::with_capacity(self.rungs.len() + 1);
        for rung in &self.rungs {
            out.push(LadderBand {
                lower: rung.beta,
                upper,
                p,
                branch: Branch::of_parity(p),
            });
            upper = rung.beta;
            p = rung.p;
        }
        out.push(LadderBand {
            lower: self.alpha,
            upper,
            p,
            branch: Branch::of_parity(p),
        });
        out
    }
}

/// `beta` from `k^2` at fixed `alpha`, inverting the modulus formula.
pub fn beta_from_modulus(alpha: f64, k2: f64) -> f64 {
    let t = k2 * (1.0 - alpha);
    (2.0 * alpha + t) / (2.0 - t)
}

/// The values of `beta` at which the degree `2m + 1` problem is degenerate.
pub fn beta_ladder(alpha: f64, m: usize) -> Result<BetaLadder> {
    if !(alpha.is_finite() && -1.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain {
            what: "alpha",
            value: alpha,
            expected: "(-1, 1)",
        });
    }
    let order = 2 * m + 2;
    let mut rungs = Vec::new();
    let mut unresolved = Vec::new();
    for p in 1..order {
        if (PI * p as f64 / order as f64).cos() <= alpha {
            break;
        }
        match solve_rung(alpha, p, order)? {
            Some(rung) => rungs.push(rung),
            None => unresolved.push(p),
        }
    }
    Ok(BetaLadder {
        alpha,
        m,
        rungs,
        unresolved,
    })
}

/// Solve `alpha = 1 - 2 sn^2(p K / order, k)` over the logistic parameter
/// `lambda = log(k^2 / k'^2)`, which keeps both `k^2` and `k'^2` exact.
fn solve_rung(alpha: f64, p: usize, order: usize) -> Result<Option<LadderRung>> {
    let squares = |lambda: f64| {
        let k2 = 1.0 / (1.0 + (-lambda).exp());
        let kprime2 = 1.0 / (1.0 + lambda.exp());
        (k2, kprime2)
    };
    let excess = |lambda: f64| -> Result<f64> {
        let (k2, kprime2) = squares(lambda);
        let modulus = Modulus::from_squares(k2, kprime2)?;
        let kk = QuarterPeriods::of(&modulus)?.real;
        let (s, _, _) = sn_cn_dn_real(p as f64 * kk / order as f64, &modulus)?;
        Ok(1.0 - 2.0 * s * s - alpha)
    };
    // Admissible k lies in (1e-12, 1 - 1e-12); stay a little inside.
    let (mut lo, mut hi) = (-54.0_f64, 26.0_f64);
    let (e_lo, e_hi) = (excess(lo)?, excess(hi)?);
    if e_lo <= 0.0 || e_hi >= 0.0 {
        debug!("ladder rung p={p}: root outside the admissible modulus band");
        return Ok(None);
    }
    for _ in 0..BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo < 1e-15 {
            break;
        }
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (k2, kprime2) = squares(0.5 * (lo + hi));
    let beta = beta_from_modulus(alpha, k2);
    let recomputed = 2.0 * (beta - alpha) / ((1.0 - alpha) * (1.0 + beta));
    Ok(Some(LadderRung {
        p,
        k: k2.sqrt(),
        kprime: kprime2.sqrt(),
        beta,
        inversion_residual: (recomputed - k2).abs(),
    }))
}
