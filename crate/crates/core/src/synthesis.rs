//! Construction of the extremal polynomials from theta-function quotients.
//!
//! Write `N = n + 1`, `h(u) = H(rho - u) / H(rho + u)` and let `T` be `Theta`
//! when `p` is odd and `Theta1` when `p` is even. Up to a constant,
//!
//! ```text
//! f(x(u)) = (F(u) - F(-u)) / S(u),    F(u) = h(u)^N [T(u + N rho) / T(u)]^2
//! ```
//!
//! with `S = sn cn dn / (sn^2 u - sn^2 rho)` for `p` odd and
//! `S = sn cn / (dn (sn^2 u - sn^2 rho))` for `p` even. For odd `n` the two
//! factors are `V ∝ A(u) + A(-u)` and `U ∝ (A(-u) - A(u)) / S` with
//! `A = h^{N/2} T(u + N rho) / T(u)`.
//!
//! On the two boundary segments `u = it` and `u = K + it` we have
//! `F(-u) = conj F(u)`, so the zeros of `f` on `E` are the zeros of
//! `Im(h^N T(u + N rho)^2)`. They are located there, in `u`, and `f` is
//! assembled in product form from them. The coefficient fit from samples at
//! real `u` (where `|x| > 1`) is kept as an independent cross-check.

use log::{debug, warn};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frame::{build_frame, Branch, CaseSelection, EllipticFrame, TwoIntervalSet};
use crate::functional::{l1_norm, transfinite_diameter};
use crate::poly::{fit_monic_chebyshev, from_linear_factors, multiply, subtract, MonicPolynomial};
use crate::theta::{theta, theta_theta_logderiv, ThetaKind};

/// Scaled Pell excess accepted by default.
pub const PELL_TOL: f64 = 1e-9;
/// Held-out residual accepted for the sampled coefficient fit.
pub const FIT_TOL: f64 = 1e-9;
/// Margin beyond `[-1, 1]` for the sign-change scan in [`extract_zeros`].
pub const SCAN_MARGIN: f64 = 1e-9;

const GRID_PER_ZERO: usize = 16;
const GRID_DOUBLINGS: usize = 5;
const BISECTION_CAP: usize = 200;

/// The two factors of `f`, split by alternate zeros.
///
/// For odd degree these are `U_m` (the zeros `xi_2, xi_4, ...`) and
/// `V_{m+1}` (`xi_1, xi_3, ...`); for even degree the same split gives
/// `P_m` and `Q_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    pub u: MonicPolynomial,
    pub v: MonicPolynomial,
    pub branch: Branch,
    pub pell: PellResidual,
}

/// The four quadratic identities satisfied by the factor pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PellForm {
    /// `(x+1)(x-beta)(x-1) U^2 - (x-alpha) V^2`
    OddBeta,
    /// `(x+1)(x-alpha)(x-1) U^2 - (x-beta) V^2`
    OddAlpha,
    /// `(x+1)(x-beta) P^2 - (x-alpha)(x-1) Q^2`
    EvenBeta,
    /// `(x+1)(x-alpha) P^2 - (x-beta)(x-1) Q^2`
    EvenAlpha,
}

impl PellForm {
    /// The identity that holds for a given degree and number `k` of zeros left of the gap.
    pub fn expected(degree: usize, gap_index: usize) -> Self {
        match (degree % 2 == 1, gap_index.is_multiple_of(2)) {
            (true, true) => PellForm::OddBeta,
            (true, false) => PellForm::OddAlpha,
            (false, true) => PellForm::EvenBeta,
            (false, false) => PellForm::EvenAlpha,
        }
    }

    pub fn alternate(self) -> Self {
        match self {
            PellForm::OddBeta => PellForm::OddAlpha,
            PellForm::OddAlpha => PellForm::OddBeta,
            PellForm::EvenBeta => PellForm::EvenAlpha,
            PellForm::EvenAlpha => PellForm::EvenBeta,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PellResidual {
    pub form: PellForm,
    /// Coefficient of `x` in the left side.
    pub a: f64,
    /// Constant term of the left side.
    pub b: f64,
    /// Largest coefficient of degree >= 2 relative to the largest coefficient of either term.
    pub excess: f64,
}

/// Left side of a Pell identity as ascending coefficients, and its scale.
pub fn pell_residual(form: PellForm, set: &TwoIntervalSet, u: &MonicPolynomial, v: &MonicPolynomial) -> PellResidual {
    let (a, b) = (set.alpha, set.beta);
    let (left_roots, right_roots): (&[f64], &[f64]) = match form {
        PellForm::OddBeta => (&[-1.0, b, 1.0], &[a]),
        PellForm::OddAlpha => (&[-1.0, a, 1.0], &[b]),
        PellForm::EvenBeta => (&[-1.0, b], &[a, 1.0]),
        PellForm::EvenAlpha => (&[-1.0, a], &[b, 1.0]),
    };
    let first = multiply(&from_linear_factors(left_roots), &multiply(u.coeffs(), u.coeffs()));
    let second = multiply(&from_linear_factors(right_roots), &multiply(v.coeffs(), v.coeffs()));
    let lhs = subtract(&first, &second);
    let scale = first
        .iter()
        .chain(&second)
        .fold(f64::MIN_POSITIVE, |m, c| m.max(c.abs()));
    let excess = lhs.iter().skip(2).fold(0.0_f64, |m, c| m.max(c.abs())) / scale;
    PellResidual {
        form,
        a: lhs.get(1).copied().unwrap_or(0.0),
        b: lhs.first().copied().unwrap_or(0.0),
        excess,
    }
}

/// The canonical family of minimizers on a degenerate frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateFamily {
    /// Zero of `f0` in the gap.
    pub gamma: f64,
    pub tau: f64,
    /// `tau^{2m+2} / (2m+2)`
    pub b_coef: f64,
    /// Common minimal value `4 tau^{2m+2}`.
    pub value: f64,
    /// Shared factor of degree `n - 1`.
    pub phi: MonicPolynomial,
    /// `(x - gamma) phi`
    pub f0: MonicPolynomial,
    /// `(x - alpha) phi`
    pub f1: MonicPolynomial,
    /// `(x - beta) phi`
    pub f2: MonicPolynomial,
}

impl DegenerateFamily {
    /// `(x - theta) phi`, a minimizer for every `theta` in `[alpha, beta]`.
    pub fn member(&self, theta: f64) -> MonicPolynomial {
        self.phi.mul(&MonicPolynomial::from_roots(&[theta]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalSolution {
    pub set: TwoIntervalSet,
    pub case: CaseSelection,
    pub f: MonicPolynomial,
    pub factors: Option<FactorPair>,
    pub zeros: Vec<f64>,
    pub minimal_value: f64,
    pub tau: f64,
    /// Stationarity residuals, one per power `x^i`, `i < n`.
    pub moment_residuals: Vec<f64>,
    /// Coefficient distance to the sampled fit, relative to the largest coefficient.
    pub fit_distance: Option<f64>,
    pub family: Option<DegenerateFamily>,
    pub warnings: Vec<String>,
}

impl ExtremalSolution {
    pub fn degree(&self) -> usize {
        self.case.degree
    }

    pub fn pell_excess(&self) -> Option<f64> {
        self.factors.as_ref().map(|f| f.pell.excess)
    }

    pub fn max_moment_residual(&self) -> f64 {
        self.moment_residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Minimal-L1 monic polynomial of the given degree on `set`.
pub fn solve(set: TwoIntervalSet, degree: usize) -> Result<ExtremalSolution> {
    if degree == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let frame = build_frame(set)?;
    solve_on_frame(&frame, degree)
}

pub fn solve_on_frame(frame: &EllipticFrame, degree: usize) -> Result<ExtremalSolution> {
    let case = frame.classify_case(degree);
    debug!(
        "degree {degree}: p={} sigma/K={:.3e} branch={}",
        case.p,
        case.sigma_over_k,
        case.branch.label()
    );
    let set = frame.set;
    let tau = transfinite_diameter(frame)?;
    let mut warnings = Vec::new();

    let (f, factors, family, fit_distance) = if case.branch == Branch::Degenerate {
        let family = synthesize_degenerate(frame, &case)?;
        let fit_distance = match fit_degenerate_phi(frame, &case) {
            Ok(fit) => Some(relative_distance(&fit, &family.phi)),
            Err(e) => {
                warnings.push(format!("sampled fit skipped: {e}"));
                None
            }
        };
        let f = if degree % 2 == 1 {
            family.f0.clone()
        } else {
            let msg = "degenerate frame for even degree: returning the endpoint member chosen by the parity of p";
            warn!("{msg}");
            warnings.push(msg.to_string());
            if case.p.is_multiple_of(2) {
                family.f2.clone()
            } else {
                family.f1.clone()
            }
        };
        (f, None, Some(family), fit_distance)
    } else {
        let pair = synthesize_factors(frame, &case, &mut warnings)?;
        let f = pair.u.mul(&pair.v);
        let fit_distance = match fit_from_samples(frame, &case) {
            Ok(fit) => Some(relative_distance(&fit, &f)),
            Err(e) => {
                warnings.push(format!("sampled fit skipped: {e}"));
                None
            }
        };
        (f, Some(pair), None, fit_distance)
    };

    let zeros = f.roots().map(<[f64]>::to_vec).unwrap_or_default();
    let minimal_value = l1_norm(&f, &set)?.value;
    let gap_index = zeros.iter().filter(|&&z| z <= set.alpha).count();
    let moment_residuals = moment_residuals(&zeros, &set, gap_index)?;
    Ok(ExtremalSolution {
        set,
        case,
        f,
        factors,
        zeros,
        minimal_value,
        tau,
        moment_residuals,
        fit_distance,
        family,
        warnings,
    })
}

fn relative_distance(a: &MonicPolynomial, b: &MonicPolynomial) -> f64 {
    let scale = b.coeffs().iter().fold(1.0_f64, |m, c| m.max(c.abs()));
    a.coeff_distance(b) / scale
}

/// Factor pair for odd degree `2m + 1` on a non-degenerate frame.
pub fn synthesize_odd(frame: &EllipticFrame, case: &CaseSelection) -> Result<FactorPair> {
    if case.degree.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("degree {} is even", case.degree)));
    }
    synthesize_factors(frame, case, &mut Vec::new())
}

/// Factor pair `(P_m, Q_m)` for even degree `2m` on a non-degenerate frame.
pub fn synthesize_even(frame: &EllipticFrame, case: &CaseSelection) -> Result<FactorPair> {
    if case.degree % 2 == 1 {
        return Err(Error::InvalidInput(format!("degree {} is odd", case.degree)));
    }
    synthesize_factors(frame, case, &mut Vec::new())
}

fn synthesize_factors(
    frame: &EllipticFrame,
    case: &CaseSelection,
    warnings: &mut Vec<String>,
) -> Result<FactorPair> {
    if case.branch == Branch::Degenerate {
        return Err(Error::InvalidInput(
            "degenerate frame: use the degenerate family".into(),
        ));
    }
    let primary = theta_kind_for(case.branch);
    match factors_with_kind(frame, case, primary, true) {
        Ok(pair) if pair.pell.excess <= PELL_TOL => Ok(pair),
        first => {
            let first_excess = match &first {
                Ok(pair) => pair.pell.excess,
                Err(_) => f64::INFINITY,
            };
            let swapped = match primary {
                ThetaKind::Theta => ThetaKind::Theta1,
                _ => ThetaKind::Theta,
            };
            let second = factors_with_kind(frame, case, swapped, false);
            match second {
                Ok(pair) if pair.pell.excess <= PELL_TOL => {
                    let msg = format!("Pell check passed only with the swapped theta labelling ({swapped:?})");
                    warn!("{msg}");
                    warnings.push(msg);
                    Ok(pair)
                }
                Ok(pair) => Err(Error::BranchMismatch {
                    excess: first_excess.min(pair.pell.excess),
                }),
                Err(_) => match first {
                    Err(e) => Err(e),
                    Ok(_) => Err(Error::BranchMismatch {
                        excess: first_excess,
                    }),
                },
            }
        }
    }
}

/// Factor pair from the formula of `branch` alone, with no fallback to the
/// other theta function.
pub fn synthesize_branch(frame: &EllipticFrame, case: &CaseSelection, branch: Branch) -> Result<FactorPair> {
    if branch == Branch::Degenerate {
        return Err(Error::InvalidInput(
            "degenerate frame: use the degenerate family".into(),
        ));
    }
    factors_with_kind(frame, case, theta_kind_for(branch), true)
}

fn theta_kind_for(branch: Branch) -> ThetaKind {
    match branch {
        Branch::OddP => ThetaKind::Theta,
        _ => ThetaKind::Theta1,
    }
}

fn factors_with_kind(
    frame: &EllipticFrame,
    case: &CaseSelection,
    kind: ThetaKind,
    check_counts: bool,
) -> Result<FactorPair> {
    let degree = case.degree;
    let phase = Phase::new(frame, degree + 1, Some(kind));
    let located = locate_zeros(&phase, degree)?;
    if check_counts {
        let found = (located.left.len(), located.right.len());
        let expected = case.zero_split();
        if found != expected {
            return Err(Error::ZeroCount {
                context: "zeros on [-1, alpha]",
                expected: expected.0,
                found: found.0,
            });
        }
    }
    let zeros: Vec<f64> = located.all().iter().map(|z| z.x).collect();
    let (even_idx, odd_idx) = split_alternate(&zeros);
    if degree % 2 == 1 {
        // Cross-check the alternation against the phase of A at each zero.
        for z in located.all() {
            let a = phase.amplitude(z.u)?;
            let v_zero = a.re.abs() < a.im.abs();
            let alternate_says_v = odd_idx.contains(&z.x);
            if v_zero != alternate_says_v {
                return Err(Error::Partition {
                    gap_index: located.left.len(),
                });
            }
        }
    }
    let u = MonicPolynomial::from_roots(&even_idx);
    let v = MonicPolynomial::from_roots(&odd_idx);
    let form = PellForm::expected(degree, located.left.len());
    let pell = pell_residual(form, &frame.set, &u, &v);
    debug!("{kind:?}: Pell {:?} excess {:.3e}", pell.form, pell.excess);
    Ok(FactorPair {
        u,
        v,
        branch: case.branch,
        pell,
    })
}

/// `(xi_2, xi_4, ...)` and `(xi_1, xi_3, ...)` from sorted zeros.
fn split_alternate(zeros: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let even = zeros.iter().skip(1).step_by(2).copied().collect();
    let odd = zeros.iter().step_by(2).copied().collect();
    (even, odd)
}

/// Theta quotients along the boundary of the fundamental rectangle.
struct Phase<'a> {
    frame: &'a EllipticFrame,
    order: usize,
    kind: Option<ThetaKind>,
    /// `N rho` reduced modulo `2K`.
    shift: f64,
}

impl<'a> Phase<'a> {
    fn new(frame: &'a EllipticFrame, order: usize, kind: Option<ThetaKind>) -> Self {
        let period = 2.0 * frame.quarter();
        let shift = (order as f64 * frame.rho).rem_euclid(period);
        Self {
            frame,
            order,
            kind,
            shift,
        }
    }

    fn h(&self, u: Complex64) -> Result<Complex64> {
        let nome = &self.frame.nome;
        let rho = Complex64::new(self.frame.rho, 0.0);
        Ok(theta(ThetaKind::H, rho - u, nome)?.value / theta(ThetaKind::H, rho + u, nome)?.value)
    }

    /// `h^N T(u + N rho)^2`, or `h^N` without a theta kind.
    fn g(&self, u: Complex64) -> Result<Complex64> {
        let hn = self.h(u)?.powu(self.order as u32);
        match self.kind {
            Some(kind) => {
                let t = theta(kind, u + self.shift, &self.frame.nome)?.value;
                Ok(hn * t * t)
            }
            None => Ok(hn),
        }
    }

    /// `h^{N/2} T(u + N rho) / T(u)`, for even `N`.
    fn amplitude(&self, u: Complex64) -> Result<Complex64> {
        let kind = self.kind.unwrap_or(ThetaKind::Theta);
        let nome = &self.frame.nome;
        let half = self.h(u)?.powu((self.order / 2) as u32);
        Ok(half * theta(kind, u + self.shift, nome)?.value / theta(kind, u, nome)?.value)
    }

    /// `F(u) = h^N [T(u + N rho) / T(u)]^2` at real `u`.
    fn quotient_real(&self, u: f64) -> Result<(f64, f64)> {
        let nome = &self.frame.nome;
        let uc = Complex64::new(u, 0.0);
        let scale = match self.kind {
            Some(kind) => {
                let denom = theta(kind, uc, nome)?.value;
                let plus = theta(kind, uc + self.shift, nome)?.value / denom;
                let minus = theta(kind, -uc + self.shift, nome)?.value / denom;
                (plus * plus, minus * minus)
            }
            None => (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
        };
        let h = self.h(uc)?.re;
        let hn = h.powi(self.order as i32);
        Ok((hn * scale.0.re, scale.1.re / hn))
    }
}

#[derive(Debug, Clone, Copy)]
struct LocatedZero {
    x: f64,
    u: Complex64,
}

struct Located {
    left: Vec<LocatedZero>,
    right: Vec<LocatedZero>,
}

impl Located {
    fn all(&self) -> Vec<LocatedZero> {
        let mut all: Vec<LocatedZero> = self.left.iter().chain(&self.right).copied().collect();
        all.sort_by(|a, b| a.x.total_cmp(&b.x));
        all
    }

    fn count(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

#[derive(Debug, Clone, Copy)]
enum Segment {
    /// `u = it`, image `[-1, alpha]`.
    Left,
    /// `u = K + it`, image `[beta, 1]`.
    Right,
}

impl Segment {
    fn point(self, frame: &EllipticFrame, t: f64) -> Complex64 {
        match self {
            Segment::Left => Complex64::new(0.0, t),
            Segment::Right => Complex64::new(frame.quarter(), t),
        }
    }
}

/// Zeros of `Im g` on the open boundary segments, refining the grid until
/// `expected` of them are found.
fn locate_zeros(phase: &Phase, expected: usize) -> Result<Located> {
    let frame = phase.frame;
    let kp = frame.quarter_prime();
    let mut points = GRID_PER_ZERO * (phase.order + 1);
    let mut margin = 1e-7 * kp;
    let mut last = None;
    for _ in 0..=GRID_DOUBLINGS {
        let left = scan_segment(phase, Segment::Left, points, margin)?;
        let right = scan_segment(phase, Segment::Right, points, margin)?;
        let located = Located { left, right };
        if located.count() == expected {
            return Ok(located);
        }
        debug!(
            "found {} of {expected} zeros with {points} grid points; refining",
            located.count()
        );
        last = Some(located.count());
        points *= 2;
        margin *= 1e-2;
    }
    Err(Error::ZeroCount {
        context: "theta phase scan",
        expected,
        found: last.unwrap_or(0),
    })
}

fn scan_segment(phase: &Phase, segment: Segment, points: usize, margin: f64) -> Result<Vec<LocatedZero>> {
    let frame = phase.frame;
    let kp = frame.quarter_prime();
    let span = kp - 2.0 * margin;
    let signal = |t: f64| -> Result<f64> {
        let g = phase.g(segment.point(frame, t))?;
        Ok(g.im / g.norm())
    };
    let ts: Vec<f64> = (0..=points)
        .map(|i| margin + span * 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / points as f64).cos()))
        .collect();
    let values: Vec<f64> = ts.iter().map(|&t| signal(t)).collect::<Result<_>>()?;
    let mut zeros = Vec::new();
    for i in 0..points {
        let (a, b) = (values[i], values[i + 1]);
        let t = if a == 0.0 {
            Some(ts[i])
        } else if a * b < 0.0 {
            Some(bisect(&signal, ts[i], ts[i + 1], a, 1e-16 * kp)?)
        } else {
            None
        };
        if let Some(t) = t {
            let u = segment.point(frame, t);
            let x = frame.map_x(u)?;
            zeros.push(LocatedZero { x: x.re, u });
        }
    }
    Ok(zeros)
}

/// Bisection on a sign change, to a bracket no wider than `width`.
fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64, width: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    for _ in 0..BISECTION_CAP {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= width {
            return Ok(mid);
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if (v < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = v;
        } else {
            hi = mid;
        }
    }
    Err(Error::IterationCap {
        what: "zero bisection",
        cap: BISECTION_CAP,
    })
}

/// The family `(x - theta) phi`, `alpha <= theta <= beta`, on a degenerate frame.
pub fn synthesize_degenerate(frame: &EllipticFrame, case: &CaseSelection) -> Result<DegenerateFamily> {
    if case.branch != Branch::Degenerate {
        return Err(Error::NotDegenerate {
            degree: case.degree,
            sigma_over_k: case.sigma_over_k,
        });
    }
    let degree = case.degree;
    let phase = Phase::new(frame, degree + 1, None);
    let located = locate_zeros(&phase, degree - 1)?;
    let expected = case.zero_split();
    if (located.left.len(), located.right.len()) != expected {
        return Err(Error::ZeroCount {
            context: "degenerate zeros on [-1, alpha]",
            expected: expected.0,
            found: located.left.len(),
        });
    }
    let phi_zeros: Vec<f64> = located.all().iter().map(|z| z.x).collect();
    let phi = MonicPolynomial::from_roots(&phi_zeros);

    let (a, b) = (frame.set.alpha, frame.set.beta);
    let logderiv = theta_theta_logderiv(frame.rho, &frame.nome)?;
    let gamma = a + 2.0 * frame.sn_rho * frame.cn_rho / frame.dn_rho * logderiv;
    let tau = transfinite_diameter(frame)?;
    let order = (degree + 1) as f64;
    let b_coef = tau.powf(order) / order;
    let member = |theta: f64| phi.mul(&MonicPolynomial::from_roots(&[theta]));
    Ok(DegenerateFamily {
        gamma,
        tau,
        b_coef,
        value: 4.0 * tau.powf(order),
        f0: member(gamma),
        f1: member(a),
        f2: member(b),
        phi,
    })
}

/// Sample points `x = ±(2 + cos theta_j)` and held-out points between them.
fn sample_abscissae(count: usize) -> (Vec<f64>, Vec<f64>) {
    let per_side = count.div_ceil(2);
    let node = |j: f64, n: usize| 2.0 + (std::f64::consts::PI * j / n as f64).cos();
    let mut xs = Vec::with_capacity(2 * per_side);
    for j in 0..per_side {
        let x = node(j as f64 + 0.5, per_side);
        xs.push(x);
        xs.push(-x);
    }
    let holdout = (0..3)
        .flat_map(|j| {
            let x = node(j as f64 + 0.25, 3);
            [x, -x]
        })
        .collect();
    (xs, holdout)
}

/// `f` (odd `p`: `S = sn cn dn / D`, even `p`: `S = sn cn / (dn D)`) at real
/// `u` from the theta quotient, up to a constant factor.
fn sampled_value(phase: &Phase, case: &CaseSelection, u: f64) -> Result<f64> {
    let frame = phase.frame;
    let (s, c, d) = crate::elliptic::sn_cn_dn_real(u, &frame.modulus)?;
    let denom = s * s - frame.sn_rho * frame.sn_rho;
    let (plus, minus) = phase.quotient_real(u)?;
    let weight = if case.branch == Branch::OddP || phase.kind.is_none() {
        s * c * d / denom
    } else {
        s * c / (d * denom)
    };
    Ok((plus - minus) / weight)
}

fn fit_samples<F>(frame: &EllipticFrame, degree: usize, value: F) -> Result<MonicPolynomial>
where
    F: Fn(f64) -> Result<f64>,
{
    let (xs, holdout) = sample_abscissae(2 * (degree + 1));
    let eval_at = |x: f64| -> Result<f64> {
        let u = frame.inverse_map(x, crate::frame::Sheet::Upper)?;
        value(u.re)
    };
    let ys: Vec<f64> = xs.iter().map(|&x| eval_at(x)).collect::<Result<_>>()?;
    let hy: Vec<f64> = holdout.iter().map(|&x| eval_at(x)).collect::<Result<_>>()?;
    Ok(fit_monic_chebyshev(&xs, &ys, &holdout, &hy, degree, FIT_TOL)?.poly)
}

/// `f` recovered from samples at real `u`, fitted in a Chebyshev basis.
pub fn fit_from_samples(frame: &EllipticFrame, case: &CaseSelection) -> Result<MonicPolynomial> {
    let phase = Phase::new(frame, case.degree + 1, Some(theta_kind_for(case.branch)));
    fit_samples(frame, case.degree, |u| sampled_value(&phase, case, u))
}

/// `phi` on a degenerate frame from samples of `(h^N - h^{-N}) D^2 / (sn cn dn)`.
fn fit_degenerate_phi(frame: &EllipticFrame, case: &CaseSelection) -> Result<MonicPolynomial> {
    let phase = Phase::new(frame, case.degree + 1, None);
    fit_samples(frame, case.degree - 1, |u| {
        let (s, c, d) = crate::elliptic::sn_cn_dn_real(u, &frame.modulus)?;
        let denom = s * s - frame.sn_rho * frame.sn_rho;
        let (plus, minus) = phase.quotient_real(u)?;
        Ok((plus - minus) * denom * denom / (s * c * d))
    })
}

/// Real zeros of `f` on `[-1 - 1e-9, 1 + 1e-9]` by sign changes on a cosine grid.
pub fn extract_zeros(f: &MonicPolynomial, set: &TwoIntervalSet) -> Result<Vec<f64>> {
    let degree = f.degree();
    if degree == 0 {
        return Err(Error::InvalidInput("constant polynomial has no zeros".into()));
    }
    let _ = set;
    let mut points = GRID_PER_ZERO * degree;
    let mut found = Vec::new();
    for _ in 0..=GRID_DOUBLINGS {
        let (zeros, scale) = sign_changes(f, -1.0 - SCAN_MARGIN, 1.0 + SCAN_MARGIN, points)?;
        found = zeros;
        if found.len() >= degree {
            if let Some(&z) = found.iter().find(|&&z| f.derivative_at(z).abs() <= 1e-8 * scale) {
                debug!("zero {z} of {f:?} is not simple");
                return Err(Error::ZeroCount {
                    context: "simple zeros",
                    expected: degree,
                    found: found.len() - 1,
                });
            }
            return Ok(found);
        }
        points *= 2;
    }
    Err(Error::ZeroCount {
        context: "real zeros in [-1, 1]",
        expected: degree,
        found: found.len(),
    })
}

/// Sign changes of `f` on `[lo, hi]` over a cosine grid with `points` intervals,
/// refined by bisection; also returns the largest `|f|` seen on the grid.
pub fn sign_changes(f: &MonicPolynomial, lo: f64, hi: f64, points: usize) -> Result<(Vec<f64>, f64)> {
    let xs: Vec<f64> = (0..=points)
        .map(|i| 0.5 * (lo + hi) - 0.5 * (hi - lo) * (std::f64::consts::PI * i as f64 / points as f64).cos())
        .collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let scale = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut found = Vec::new();
    for i in 0..points {
        let (a, b) = (vals[i], vals[i + 1]);
        if a == 0.0 {
            found.push(xs[i]);
        } else if a * b < 0.0 {
            found.push(bisect(&|x| Ok(f.eval(x)), xs[i], xs[i + 1], a, 1e-16)?);
        }
    }
    if vals[points] == 0.0 {
        found.push(xs[points]);
    }
    Ok((found, scale))
}

/// Alternating moment sums of the stationarity system.
///
/// With zeros `xi_1 <= ... <= xi_k <= alpha < beta <= xi_{k+1} <= ... <= xi_n`,
/// entry `i` is `∫_E s(x) x^i dx` where `s = +1` on `[-1, xi_1]` and flips
/// at every zero. One zero inside the gap (degenerate frames) is accepted as
/// `xi_{k+1}`; the sign then flips across the gap.
pub fn moment_residuals(zeros: &[f64], set: &TwoIntervalSet, gap_index: usize) -> Result<Vec<f64>> {
    let n = zeros.len();
    let sorted = zeros.windows(2).all(|w| w[0] <= w[1]);
    let in_gap = zeros.iter().filter(|&&z| z > set.alpha && z < set.beta).count();
    let split_ok = gap_index <= n
        && zeros[..gap_index].iter().all(|&z| z <= set.alpha)
        && zeros[gap_index..].iter().all(|&z| z > set.alpha);
    if !(sorted && split_ok && in_gap <= 1) {
        return Err(Error::Partition { gap_index });
    }
    let mut pieces = Vec::with_capacity(n + 2);
    let mut signs = Vec::with_capacity(n + 2);
    for (lo, hi) in set.pieces() {
        let mut prev = lo;
        let inner = zeros.iter().copied().filter(|&z| z > lo && z < hi);
        for z in inner.chain(std::iter::once(hi)) {
            let passed = zeros.iter().filter(|&&w| w <= prev).count();
            pieces.push((prev, z));
            signs.push(if passed % 2 == 0 { 1.0 } else { -1.0 });
            prev = z;
        }
    }
    Ok(power_moments(&pieces, &signs, n))
}

fn power_moments(pieces: &[(f64, f64)], signs: &[f64], count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| {
            let p = (i + 1) as i32;
            pieces
                .iter()
                .zip(signs)
                .map(|(&(a, b), s)| s * (b.powi(p) - a.powi(p)) / p as f64)
                .sum()
        })
        .collect()
}
