//! The functional `∫_E |f| dx`, the closed-form values of the degenerate
//! family, and the large-degree estimate built from the same theta ratio.

use gauss_quad::GaussLegendre;
use std::num::NonZeroUsize;

use crate::error::{Error, Result};
use crate::frame::{beta_ladder, build_frame, Branch, EllipticFrame, TwoIntervalSet};
use crate::poly::MonicPolynomial;
use crate::synthesis::{sign_changes, DegenerateFamily};
use crate::theta::{theta_real, ThetaKind};

#[derive(Debug, Clone, PartialEq)]
pub struct L1Report {
    pub value: f64,
    /// Sign of `f` on each sign-constant piece, left to right.
    pub sign_pattern: Vec<i8>,
    /// Zeros of `f` inside `E`.
    pub split_points: Vec<f64>,
    /// `|value - value on a 2x finer subdivision| / value`.
    pub refinement_delta: f64,
}

/// `∫_E |f(x)| dx`, integrating exactly between consecutive zeros.
pub fn l1_norm(f: &MonicPolynomial, set: &TwoIntervalSet) -> Result<L1Report> {
    l1_norm_scaled(f, 1.0, set)
}

/// `∫_E |c f|`.
pub fn l1_norm_scaled(f: &MonicPolynomial, c: f64, set: &TwoIntervalSet) -> Result<L1Report> {
    let zeros: Vec<f64> = match f.roots() {
        Some(r) => r.to_vec(),
        None if f.degree() == 0 => Vec::new(),
        None => {
            let mut zeros = Vec::new();
            for (lo, hi) in set.pieces() {
                zeros.extend(sign_changes(f, lo, hi, 32 * (f.degree() + 1))?.0);
            }
            zeros
        }
    };
    let mut pieces = Vec::new();
    let mut split_points = Vec::new();
    for (lo, hi) in set.pieces() {
        let mut cuts = vec![lo];
        for &z in &zeros {
            if z > lo && z < hi {
                cuts.push(z);
                split_points.push(z);
            }
        }
        cuts.push(hi);
        pieces.extend(cuts.windows(2).map(|w| (w[0], w[1])));
    }
    // Exact for polynomials of degree <= 2 * nodes - 1.
    let nodes = NonZeroUsize::new(f.degree() / 2 + 2).expect("nonzero node count");
    let rule = GaussLegendre::new(nodes);
    let mut value = 0.0;
    let mut refined = 0.0;
    let mut sign_pattern = Vec::with_capacity(pieces.len());
    for &(a, b) in &pieces {
        if b <= a {
            continue;
        }
        let g = |x: f64| c * f.eval(x);
        let whole = rule.integrate(a, b, g);
        let mid = 0.5 * (a + b);
        let halves = rule.integrate(a, mid, g) + rule.integrate(mid, b, g);
        sign_pattern.push(if whole >= 0.0 { 1 } else { -1 });
        value += whole.abs();
        refined += halves.abs();
    }
    let refinement_delta = if value > 0.0 {
        (value - refined).abs() / value
    } else {
        0.0
    };
    Ok(L1Report {
        value,
        sign_pattern,
        split_points,
        refinement_delta,
    })
}

/// `Theta(0) Theta1(0) / (Theta(rho) Theta1(rho))`.
pub fn theta_ratio(frame: &EllipticFrame) -> Result<f64> {
    let nome = &frame.nome;
    let at = |kind, u| theta_real(kind, u, nome);
    Ok(at(ThetaKind::Theta, 0.0)? * at(ThetaKind::Theta1, 0.0)?
        / (at(ThetaKind::Theta, frame.rho)? * at(ThetaKind::Theta1, frame.rho)?))
}

/// Logarithmic capacity of `E`, `tau = (1/2) [Theta(0) Theta1(0) / (Theta(rho) Theta1(rho))]^2`.
pub fn transfinite_diameter(frame: &EllipticFrame) -> Result<f64> {
    let r = theta_ratio(frame)?;
    Ok(0.5 * r * r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormValue {
    pub m: usize,
    pub tau: f64,
    /// `tau^{2m+2} / (2m+2)`
    pub b_coef: f64,
    /// The same coefficient from the theta ratio power directly.
    pub b_theta_form: f64,
    /// `4 B (2m + 2) = 4 tau^{2m+2}`
    pub value: f64,
}

impl ClosedFormValue {
    pub fn b_agreement(&self) -> f64 {
        (self.b_coef - self.b_theta_form).abs() / self.b_coef
    }
}

/// Minimal value of the degree `2m + 1` problem on a degenerate frame.
pub fn closed_form_degenerate_value(m: usize, frame: &EllipticFrame) -> Result<ClosedFormValue> {
    let degree = 2 * m + 1;
    let case = frame.classify_case(degree);
    if case.branch != Branch::Degenerate {
        return Err(Error::NotDegenerate {
            degree,
            sigma_over_k: case.sigma_over_k,
        });
    }
    let order = (2 * m + 2) as f64;
    let ratio = theta_ratio(frame)?;
    let tau = 0.5 * ratio * ratio;
    let b_coef = tau.powf(order) / order;
    let b_theta_form = ratio.powf(2.0 * order) / (order * 4f64.powf(m as f64 + 1.0));
    Ok(ClosedFormValue {
        m,
        tau,
        b_coef,
        b_theta_form,
        value: 4.0 * b_coef * order,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinCheck {
    /// `max_E |f0| sqrt((1 - x^2)(alpha - x)(beta - x)) / |x - gamma|`
    pub sup: f64,
    /// The same maximum with half the grid spacing.
    pub sup_refined_grid: f64,
    /// `2 B (2m + 2)`
    pub target: f64,
    pub discrepancy: f64,
}

const BERNSTEIN_GRID: usize = 4096;

/// Weighted sup norm of the canonical degenerate solution against half its L1 value.
pub fn bernstein_degenerate_check(family: &DegenerateFamily, frame: &EllipticFrame) -> BernsteinCheck {
    let set = frame.set;
    // f0 / (x - gamma) is exactly phi.
    let weighted = |x: f64| {
        let w = ((1.0 - x * x) * (set.alpha - x) * (set.beta - x)).max(0.0).sqrt();
        family.phi.eval(x).abs() * w
    };
    let sup = weighted_sup(&weighted, &set, BERNSTEIN_GRID);
    let sup_refined_grid = weighted_sup(&weighted, &set, 2 * BERNSTEIN_GRID);
    let target = 0.5 * family.value;
    BernsteinCheck {
        sup,
        sup_refined_grid,
        target,
        discrepancy: (sup - target).abs() / target,
    }
}

/// Grid maximum over `E` followed by golden-section polishing of each local maximum.
fn weighted_sup<F: Fn(f64) -> f64>(g: &F, set: &TwoIntervalSet, points: usize) -> f64 {
    let total = set.measure();
    let mut best = 0.0_f64;
    for (lo, hi) in set.pieces() {
        let n = ((points as f64 * (hi - lo) / total).ceil() as usize).max(8);
        let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        let vals: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
        for i in 0..=n {
            best = best.max(vals[i]);
            let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
            let right = if i < n { vals[i + 1] } else { f64::NEG_INFINITY };
            if vals[i] >= left && vals[i] >= right && i > 0 && i < n {
                best = best.max(golden_max(g, xs[i - 1], xs[i + 1]));
            }
        }
    }
    best
}

fn golden_max<F: Fn(f64) -> f64>(g: &F, mut a: f64, mut b: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..100 {
        if (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
    }
    gc.max(gd)
}

/// `2^{-2m} [Theta(0) Theta1(0) / (Theta(rho) Theta1(rho))]^{4(m+1)}`, an estimate of
/// the minimal value for degree `2m + 1` that is exact on degenerate frames.
pub fn asymptotic_g(m: usize, frame: &EllipticFrame) -> Result<f64> {
    let r = theta_ratio(frame)?;
    Ok(r.powf(4.0 * (m as f64 + 1.0)) / 4f64.powf(m as f64))
}

/// `4 tau^{2m+2}` for `E = [-1, alpha] ∪ [beta, 1]`, continued to the end points
/// `beta = alpha` (one interval) and `beta = 1` (the interval `[-1, alpha]`).
pub fn degenerate_value_at(alpha: f64, beta: f64, m: usize) -> Result<f64> {
    let order = 2.0 * m as f64 + 2.0;
    let tau = if beta <= alpha {
        0.5
    } else if beta >= 1.0 {
        0.25 * (1.0 + alpha)
    } else {
        transfinite_diameter(&build_frame(TwoIntervalSet::new(alpha, beta)?)?)?
    };
    Ok(4.0 * tau.powf(order))
}

/// Bounds on the degree `2m + 1` minimal value from the two ladder rungs around `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
    /// The rung above `beta` (1 if none).
    pub beta_above: f64,
    /// The rung below `beta` (`alpha` if none).
    pub beta_below: f64,
}

impl Sandwich {
    pub fn contains(&self, value: f64, rtol: f64) -> bool {
        value >= self.lower * (1.0 - rtol) && value <= self.upper * (1.0 + rtol)
    }
}

pub fn sandwich_bounds(set: &TwoIntervalSet, m: usize) -> Result<Sandwich> {
    let ladder = beta_ladder(set.alpha, m)?;
    let mut beta_above = 1.0_f64;
    let mut beta_below = set.alpha;
    for rung in &ladder.rungs {
        if rung.beta >= set.beta {
            beta_above = beta_above.min(rung.beta);
        } else {
            beta_below = beta_below.max(rung.beta);
        }
    }
    Ok(Sandwich {
        lower: degenerate_value_at(set.alpha, beta_above, m)?,
        upper: degenerate_value_at(set.alpha, beta_below, m)?,
        beta_above,
        beta_below,
    })
}

/// Minimal value on `[-1, 1]` (second-kind Chebyshev polynomial), `2^{1-n}`.
pub fn single_interval_value(degree: usize) -> f64 {
    2f64.powi(1 - degree as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn set(a: f64, b: f64) -> TwoIntervalSet {
        TwoIntervalSet::new(a, b).unwrap()
    }

    #[test]
    fn measure_of_e() {
        let s = set(-0.3, 0.4);
        let r = l1_norm(&MonicPolynomial::one(), &s).unwrap();
        assert_relative_eq!(r.value, 0.7 + 0.6, max_relative = 1e-15);
    }

    #[test]
    fn identity_on_symmetric_set() {
        let s = set(-0.4, 0.4);
        let f = MonicPolynomial::from_coeffs(&[0.0, 1.0]).unwrap();
        let r = l1_norm(&f, &s).unwrap();
        assert_relative_eq!(r.value, 1.0 - 0.16, max_relative = 1e-14);
        assert_eq!(r.sign_pattern, vec![-1, 1]);
        assert!(r.split_points.is_empty());
    }

    #[test]
    fn splits_at_interior_zeros() {
        let s = set(-0.2, 0.3);
        let f = MonicPolynomial::from_roots(&[-0.5, 0.6]);
        let r = l1_norm(&f, &s).unwrap();
        assert_eq!(r.split_points, vec![-0.5, 0.6]);
        let antider = |x: f64| x * x * x / 3.0 - 0.05 * x * x - 0.3 * x;
        let exact = (antider(-0.5) - antider(-1.0)).abs()
            + (antider(-0.2) - antider(-0.5)).abs()
            + (antider(0.6) - antider(0.3)).abs()
            + (antider(1.0) - antider(0.6)).abs();
        assert_relative_eq!(r.value, exact, max_relative = 1e-14);
        assert!(r.refinement_delta < 1e-12);
    }

    #[test]
    fn symmetric_capacity() {
        for a in [0.2, 0.5, 0.8] {
            let f = build_frame(set(-a, a)).unwrap();
            let tau = transfinite_diameter(&f).unwrap();
            assert_relative_eq!(tau, (1.0 - a * a).sqrt() / 2.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn capacity_as_gap_closes() {
        let f = build_frame(set(0.1, 0.1 + 1e-6)).unwrap();
        assert!((transfinite_diameter(&f).unwrap() - 0.5).abs() < 1e-4);
    }

    #[test]
    fn closed_form_needs_degenerate_frame() {
        let f = build_frame(set(-0.3, 0.4)).unwrap();
        assert!(matches!(
            closed_form_degenerate_value(1, &f),
            Err(Error::NotDegenerate { .. })
        ));
        let f = build_frame(set(-0.5, 0.5)).unwrap();
        let v = closed_form_degenerate_value(1, &f).unwrap();
        assert!(v.b_agreement() < 1e-11);
        assert_relative_eq!(v.value, 4.0 * (3f64.sqrt() / 4.0).powi(4), max_relative = 1e-12);
    }

    #[test]
    fn asymptotic_equals_closed_form_when_degenerate() {
        let f = build_frame(set(-0.5, 0.5)).unwrap();
        for m in 1..6 {
            let exact = closed_form_degenerate_value(m, &f).unwrap().value;
            assert_relative_eq!(asymptotic_g(m, &f).unwrap(), exact, max_relative = 1e-12);
        }
    }

    #[test]
    fn end_point_values_meet_single_interval_results() {
        // beta -> alpha: the whole of [-1, 1].
        assert_relative_eq!(degenerate_value_at(0.1, 0.1, 2).unwrap(), single_interval_value(5));
        // beta -> 1: [-1, alpha] rescaled.
        let alpha = 0.2;
        let len: f64 = 1.0 + alpha;
        assert_relative_eq!(
            degenerate_value_at(alpha, 1.0, 2).unwrap(),
            single_interval_value(5) * (len / 2.0).powi(6),
            max_relative = 1e-14
        );
    }
}
