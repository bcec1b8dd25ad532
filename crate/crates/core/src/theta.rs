//! Jacobi theta functions `H`, `H1`, `Theta`, `Theta1` in the classical
//! notation, summed as `q`-series in the nome `q = exp(-pi K'/K)`.
//!
//! With `v = pi u / (2K)`:
//!
//! ```text
//! H(u)      = theta_1(v) = 2 sum (-1)^n q^{(n+1/2)^2} sin((2n+1) v)
//! H1(u)     = theta_2(v) = 2 sum        q^{(n+1/2)^2} cos((2n+1) v)
//! Theta1(u) = theta_3(v) = 1 + 2 sum        q^{n^2} cos(2 n v)
//! Theta(u)  = theta_4(v) = 1 + 2 sum (-1)^n q^{n^2} cos(2 n v)
//! ```
//!
//! so that `sn u = H(u) / (sqrt(k) Theta(u))`, `H1(u) = H(u + K)` and
//! `Theta1(u) = Theta(u + K)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::elliptic::QuarterPeriods;
use crate::error::{Error, Result};

const TERM_CAP: usize = 200;
const TERM_RTOL: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nome {
    pub q: f64,
    /// `K`
    pub quarter: f64,
    /// `K'`
    pub quarter_prime: f64,
}

impl Nome {
    pub fn from_periods(periods: &QuarterPeriods) -> Result<Self> {
        let q = (-PI * periods.imaginary / periods.real).exp();
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain {
                what: "nome q",
                value: q,
                expected: "(0, 1)",
            });
        }
        Ok(Self {
            q,
            quarter: periods.real,
            quarter_prime: periods.imaginary,
        })
    }

    /// `log q = -pi K'/K`, kept separately to avoid underflow in `q^{n^2}`.
    fn log_q(&self) -> f64 {
        -PI * self.quarter_prime / self.quarter
    }
}

/// A theta-series value with an a-posteriori bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaValue {
    pub value: Complex64,
    pub truncation_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    H,
    H1,
    Theta,
    Theta1,
}

impl ThetaKind {
    /// Sign picked up under `v -> v + pi`.
    fn half_period_sign(self) -> f64 {
        match self {
            ThetaKind::H | ThetaKind::H1 => -1.0,
            ThetaKind::Theta | ThetaKind::Theta1 => 1.0,
        }
    }

    /// Sign `s` in `theta(v + pi tau) = s q^{-1} e^{-2iv} theta(v)`.
    fn quasi_period_sign(self) -> f64 {
        match self {
            ThetaKind::H | ThetaKind::Theta => -1.0,
            ThetaKind::H1 | ThetaKind::Theta1 => 1.0,
        }
    }
}

/// Series value and `d/dv` derivative at a reduced argument.
fn series(kind: ThetaKind, v: Complex64, nome: &Nome) -> Result<(ThetaValue, Complex64)> {
    let log_q = nome.log_q();
    let growth = (2.0 * v.im.abs()).exp();
    let (mut sum, mut deriv, mut running_max, start) = match kind {
        ThetaKind::Theta | ThetaKind::Theta1 => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 1.0f64, 1usize),
        ThetaKind::H | ThetaKind::H1 => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0f64, 0usize),
    };
    for n in start..start + TERM_CAP {
        let (exponent, freq) = match kind {
            ThetaKind::Theta | ThetaKind::Theta1 => ((n * n) as f64, 2.0 * n as f64),
            ThetaKind::H | ThetaKind::H1 => {
                let h = n as f64 + 0.5;
                (h * h, 2.0 * n as f64 + 1.0)
            }
        };
        let alternating = if n % 2 == 1 { -1.0 } else { 1.0 };
        let coef = 2.0 * (exponent * log_q).exp();
        let arg = v * freq;
        let (term, dterm) = match kind {
            ThetaKind::H => (alternating * coef * arg.sin(), alternating * coef * freq * arg.cos()),
            ThetaKind::H1 => (coef * arg.cos(), -coef * freq * arg.sin()),
            ThetaKind::Theta1 => (coef * arg.cos(), -coef * freq * arg.sin()),
            ThetaKind::Theta => (alternating * coef * arg.cos(), -alternating * coef * freq * arg.sin()),
        };
        sum += term;
        deriv += dterm;
        // Envelope of the term; the trigonometric factor itself can vanish.
        let magnitude = coef * (freq * v.im.abs()).exp();
        running_max = running_max.max(sum.norm()).max(term.norm());
        // Ratio of consecutive term magnitudes bounds the tail geometrically.
        let gap = match kind {
            ThetaKind::Theta | ThetaKind::Theta1 => 2.0 * n as f64 + 1.0,
            ThetaKind::H | ThetaKind::H1 => 2.0 * n as f64 + 2.0,
        };
        let ratio = (gap * log_q).exp() * growth;
        if magnitude <= TERM_RTOL * running_max && ratio < 0.5 {
            let bound = magnitude * ratio / (1.0 - ratio);
            return Ok((
                ThetaValue {
                    value: sum,
                    truncation_bound: bound,
                },
                deriv,
            ));
        }
    }
    Err(Error::IterationCap {
        what: "theta q-series",
        cap: TERM_CAP,
    })
}

/// Evaluates `kind` at `u` together with its logarithmic derivative in `u`.
fn evaluate(kind: ThetaKind, u: Complex64, nome: &Nome) -> Result<(ThetaValue, Complex64)> {
    let scale = PI / (2.0 * nome.quarter);
    let mut v = u * scale;
    let mut factor = Complex64::new(1.0, 0.0);
    let mut log_deriv_shift = Complex64::new(0.0, 0.0);

    // theta(v + j pi tau) = s^j q^{-j^2} e^{-2ijv} theta(v)
    let im_period = PI * nome.quarter_prime / nome.quarter;
    let j = (v.im / im_period).round();
    if j != 0.0 {
        v -= Complex64::new(0.0, j * im_period);
        let sign = kind.quasi_period_sign().powi(j as i32);
        let exponent = -j * j * nome.log_q() + Complex64::new(0.0, -2.0 * j) * v;
        factor *= sign * exponent.exp();
        log_deriv_shift = Complex64::new(0.0, -2.0 * j);
    }
    let half_turns = (v.re / PI).round();
    if half_turns != 0.0 {
        v -= half_turns * PI;
        factor *= kind.half_period_sign().powi(half_turns as i32);
    }

    let (raw, deriv) = series(kind, v, nome)?;
    let log_deriv = if raw.value.norm() > 0.0 {
        (deriv / raw.value + log_deriv_shift) * scale
    } else {
        Complex64::new(f64::INFINITY, 0.0)
    };
    Ok((
        ThetaValue {
            value: raw.value * factor,
            truncation_bound: raw.truncation_bound * factor.norm(),
        },
        log_deriv,
    ))
}

pub fn theta(kind: ThetaKind, u: Complex64, nome: &Nome) -> Result<ThetaValue> {
    evaluate(kind, u, nome).map(|(value, _)| value)
}

pub fn theta_h(u: Complex64, nome: &Nome) -> Result<ThetaValue> {
    theta(ThetaKind::H, u, nome)
}

pub fn theta_h1(u: Complex64, nome: &Nome) -> Result<ThetaValue> {
    theta(ThetaKind::H1, u, nome)
}

pub fn theta_theta(u: Complex64, nome: &Nome) -> Result<ThetaValue> {
    theta(ThetaKind::Theta, u, nome)
}

pub fn theta_theta1(u: Complex64, nome: &Nome) -> Result<ThetaValue> {
    theta(ThetaKind::Theta1, u, nome)
}

/// `theta'(u) / theta(u)` for complex `u` away from the zeros of `theta`.
pub fn theta_logderiv(kind: ThetaKind, u: Complex64, nome: &Nome) -> Result<Complex64> {
    evaluate(kind, u, nome).map(|(_, d)| d)
}

/// `Theta'(u) / Theta(u)` for real `u`.
pub fn theta_theta_logderiv(u: f64, nome: &Nome) -> Result<f64> {
    theta_logderiv(ThetaKind::Theta, Complex64::new(u, 0.0), nome).map(|d| d.re)
}

/// Real-argument convenience wrapper, returning only the value.
pub fn theta_real(kind: ThetaKind, u: f64, nome: &Nome) -> Result<f64> {
    theta(kind, Complex64::new(u, 0.0), nome).map(|t| t.value.re)
}
