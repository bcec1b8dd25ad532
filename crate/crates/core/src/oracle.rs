//! Brute-force minimizer of `∫_E |f|` over monic polynomials of degree `n`,
//! independent of the elliptic construction.
//!
//! The integral is replaced by a trapezoid sum on each interval, `|t|` by
//! `sqrt(t^2 + eps^2)`, and the smoothed convex problem is solved by damped
//! Newton while `eps` shrinks geometrically. Later rounds add nodes around
//! the zeros of the current iterate, where the kinks of `|f|` sit.

use log::debug;
use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::frame::{Branch, TwoIntervalSet};
use crate::functional::l1_norm;
use crate::poly::{multiply, subtract, MonicPolynomial};
use crate::synthesis::{sign_changes, ExtremalSolution};

/// Largest degree the oracle accepts.
pub const MAX_DEGREE: usize = 12;

const EPS_START: f64 = 1e-2;
const EPS_END: f64 = 1e-10;
const EPS_FACTOR: f64 = 0.1;
const NEWTON_CAP: usize = 100;
const LINE_SEARCH_CAP: usize = 60;
/// Rounds allowed beyond `refine_rounds` while the value is still moving.
const EXTRA_ROUNDS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Trapezoid nodes per interval; odd, at least 101.
    pub grid_size: usize,
    pub refine_rounds: usize,
    /// Bound on the change of the exact value over the final round.
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            grid_size: 4001,
            refine_rounds: 2,
            tolerance: 1e-10,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_size < 101 || self.grid_size.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "oracle grid size must be odd and at least 101, got {}",
                self.grid_size
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "oracle tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub coeffs: MonicPolynomial,
    /// Exact `∫_E |f|` of the minimizer found.
    pub value: f64,
    /// Change of `value` over the last refinement round.
    pub certified_gap: f64,
    /// Value of the discretized objective at the end.
    pub discrete_value: f64,
}

/// Trapezoid nodes and weights, both intervals together.
#[derive(Debug, Clone)]
struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature {
    fn uniform(set: &TwoIntervalSet, per_interval: usize) -> Self {
        let mut pieces = Vec::new();
        for (lo, hi) in set.pieces() {
            pieces.push(
                (0..per_interval)
                    .map(|i| lo + (hi - lo) * i as f64 / (per_interval - 1) as f64)
                    .collect::<Vec<_>>(),
            );
        }
        Self::from_pieces(&pieces)
    }

    fn from_pieces(pieces: &[Vec<f64>]) -> Self {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for xs in pieces {
            let n = xs.len();
            for i in 0..n {
                let left = if i > 0 { xs[i] - xs[i - 1] } else { 0.0 };
                let right = if i + 1 < n { xs[i + 1] - xs[i] } else { 0.0 };
                nodes.push(xs[i]);
                weights.push(0.5 * (left + right));
            }
        }
        Self { nodes, weights }
    }

    /// The uniform grid plus fine patches around `zeros`.
    fn clustered(set: &TwoIntervalSet, per_interval: usize, zeros: &[f64]) -> Self {
        let mut pieces = Vec::new();
        for (lo, hi) in set.pieces() {
            let h = (hi - lo) / (per_interval - 1) as f64;
            let mut xs: Vec<f64> = (0..per_interval)
                .map(|i| lo + (hi - lo) * i as f64 / (per_interval - 1) as f64)
                .collect();
            for &z in zeros.iter().filter(|&&z| z > lo && z < hi) {
                xs.push(z);
                for j in 1..=20 {
                    let d = 4.0 * h * j as f64 / 20.0;
                    xs.extend([z - d, z + d].into_iter().filter(|&x| x > lo && x < hi));
                }
            }
            xs.sort_by(f64::total_cmp);
            xs.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
            pieces.push(xs);
        }
        Self::from_pieces(&pieces)
    }
}

/// `sum_j w_j |f(x_j)|` on the uniform trapezoid grid with `grid_size` nodes per interval.
pub fn discretized_l1(f: &MonicPolynomial, set: &TwoIntervalSet, grid_size: usize) -> f64 {
    let quad = Quadrature::uniform(set, grid_size.max(2));
    quad.nodes
        .iter()
        .zip(&quad.weights)
        .map(|(&x, w)| w * f.eval(x).abs())
        .sum()
}

/// `x^n + sum_{i<n} c_i T_i(x)` evaluated on the quadrature nodes, in
/// coordinates `d = R c` where the columns of `T R^{-1}` are orthonormal
/// under the quadrature weights.
struct Model {
    basis: DMatrix<f64>,
    r: DMatrix<f64>,
    leading: DVector<f64>,
    weights: DVector<f64>,
}

impl Model {
    fn new(quad: &Quadrature, degree: usize) -> Self {
        let m = quad.nodes.len();
        let mut basis = DMatrix::zeros(m, degree);
        let mut leading = DVector::zeros(m);
        for (j, &x) in quad.nodes.iter().enumerate() {
            let (mut t0, mut t1) = (1.0, x);
            for i in 0..degree {
                basis[(j, i)] = t0;
                let t2 = 2.0 * x * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
            leading[j] = x.powi(degree as i32);
        }
        let weights = DVector::from_column_slice(&quad.weights);
        let mut scaled = basis.clone();
        for (j, mut row) in scaled.row_iter_mut().enumerate() {
            row *= weights[j].sqrt();
        }
        let r = scaled.qr().r();
        let r_inv = r
            .clone()
            .try_inverse()
            .expect("Chebyshev columns are independent on the nodes");
        Self {
            basis: basis * r_inv,
            r,
            leading,
            weights,
        }
    }

    fn to_coords(&self, c: &DVector<f64>) -> DVector<f64> {
        &self.r * c
    }

    fn coefficients(&self, d: &DVector<f64>) -> DVector<f64> {
        self.r
            .solve_upper_triangular(d)
            .expect("triangular factor is nonsingular")
    }

    fn values(&self, c: &DVector<f64>) -> DVector<f64> {
        &self.leading + &self.basis * c
    }

    fn objective(&self, c: &DVector<f64>, eps: f64) -> f64 {
        self.values(c)
            .iter()
            .zip(self.weights.iter())
            .map(|(f, w)| w * (f * f + eps * eps).sqrt())
            .sum()
    }

    fn discrete_l1(&self, c: &DVector<f64>) -> f64 {
        self.values(c)
            .iter()
            .zip(self.weights.iter())
            .map(|(f, w)| w * f.abs())
            .sum()
    }

    /// Gradient and Hessian of the smoothed objective.
    fn derivatives(&self, c: &DVector<f64>, eps: f64) -> (DVector<f64>, DMatrix<f64>) {
        let f = self.values(c);
        let n = self.basis.ncols();
        let mut grad_w = DVector::zeros(f.len());
        let mut hess_w = DVector::zeros(f.len());
        for j in 0..f.len() {
            let s = (f[j] * f[j] + eps * eps).sqrt();
            grad_w[j] = self.weights[j] * f[j] / s;
            hess_w[j] = self.weights[j] * eps * eps / (s * s * s);
        }
        let grad = self.basis.tr_mul(&grad_w);
        let mut scaled = self.basis.clone();
        for (j, mut row) in scaled.row_iter_mut().enumerate() {
            row *= hess_w[j];
        }
        let mut hess = self.basis.tr_mul(&scaled);
        let ridge = 1e-14 * (0..n).map(|i| hess[(i, i)]).fold(f64::MIN_POSITIVE, f64::max);
        for i in 0..n {
            hess[(i, i)] += ridge;
        }
        (grad, hess)
    }
}

/// Damped Newton on the smoothed objective for one value of `eps`.
fn newton(model: &Model, mut c: DVector<f64>, eps: f64) -> Result<DVector<f64>> {
    let mut value = model.objective(&c, eps);
    for _ in 0..NEWTON_CAP {
        let (grad, hess) = model.derivatives(&c, eps);
        let chol = Cholesky::new(hess).ok_or(Error::NonConvergence {
            what: "oracle Newton system (not positive definite)",
        })?;
        let step = -chol.solve(&grad);
        let decrement = -grad.dot(&step);
        if decrement <= 1e-13 * value.max(f64::MIN_POSITIVE) {
            return Ok(c);
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..LINE_SEARCH_CAP {
            let trial = &c + &step * t;
            let trial_value = model.objective(&trial, eps);
            if trial_value <= value - 0.25 * t * decrement {
                if trial_value >= value {
                    return Ok(trial);
                }
                c = trial;
                value = trial_value;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // No further descent at working precision.
            return Ok(c);
        }
    }
    Err(Error::IterationCap {
        what: "oracle Newton iteration",
        cap: NEWTON_CAP,
    })
}

/// Chebyshev coefficients of `x^n`, lowest first.
fn chebyshev_of_power(n: usize) -> Vec<f64> {
    let mut a = vec![1.0];
    for _ in 0..n {
        let mut next = vec![0.0; a.len() + 1];
        for (k, &c) in a.iter().enumerate() {
            next[k + 1] += 0.5 * c;
            if k == 0 {
                next[1] += 0.5 * c;
            } else {
                next[k - 1] += 0.5 * c;
            }
        }
        a = next;
    }
    a
}

/// Ascending monomial coefficients of `x^n + sum c_i T_i`.
fn to_monomial(c: &DVector<f64>, degree: usize) -> Vec<f64> {
    let mut out = vec![0.0; degree + 1];
    out[degree] = 1.0;
    let (mut prev, mut cur) = (vec![1.0], vec![0.0, 1.0]);
    for (i, &ci) in c.iter().enumerate() {
        let t: &[f64] = match i {
            0 => &prev,
            1 => &cur,
            _ => {
                let next = subtract(&multiply(&[0.0, 2.0], &cur), &prev);
                prev = std::mem::replace(&mut cur, next);
                &cur
            }
        };
        for (k, tk) in t.iter().enumerate() {
            out[k] += ci * tk;
        }
    }
    out
}

pub fn oracle_minimize(degree: usize, set: &TwoIntervalSet, cfg: &OracleConfig) -> Result<OracleResult> {
    cfg.validate()?;
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::InvalidInput(format!(
            "oracle degree must be in 1..={MAX_DEGREE}, got {degree}"
        )));
    }
    // Start from the monic Chebyshev polynomial 2^{1-n} T_n.
    let power = chebyshev_of_power(degree);
    let mut c = DVector::from_iterator(degree, power[..degree].iter().map(|a| -a));

    let mut quad = Quadrature::uniform(set, cfg.grid_size);
    let mut previous: Option<f64> = None;
    let mut last_gap = f64::INFINITY;
    let mut result = None;
    for round in 0..=cfg.refine_rounds + EXTRA_ROUNDS {
        if round > cfg.refine_rounds && last_gap <= cfg.tolerance {
            break;
        }
        let model = Model::new(&quad, degree);
        let mut d = model.to_coords(&c);
        let scale = model.discrete_l1(&d) / set.measure();
        let mut eps = EPS_START;
        while eps >= EPS_END * (1.0 - 1e-9) {
            d = newton(&model, d, eps * scale)?;
            eps *= EPS_FACTOR;
        }
        let discrete_value = model.discrete_l1(&d);
        c = model.coefficients(&d);
        let poly = MonicPolynomial::from_coeffs(&to_monomial(&c, degree))?;
        let value = l1_norm(&poly, set)?.value;
        if let Some(prev) = previous {
            last_gap = (prev - value).abs();
        }
        debug!("oracle round {round}: exact {value:.15e} discrete {discrete_value:.15e} gap {last_gap:.3e}");
        previous = Some(value);

        let mut zeros = Vec::new();
        for (lo, hi) in set.pieces() {
            zeros.extend(sign_changes(&poly, lo, hi, 32 * (degree + 1))?.0);
        }
        quad = Quadrature::clustered(set, cfg.grid_size, &zeros);
        result = Some(OracleResult {
            coeffs: poly,
            value,
            certified_gap: last_gap,
            discrete_value,
        });
    }
    let result = result.expect("at least one round");
    if result.certified_gap > cfg.tolerance {
        return Err(Error::NonConvergence {
            what: "oracle refinement (final-round change above tolerance)",
        });
    }
    Ok(result)
}

/// Tolerances for comparing the construction with the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyTolerance {
    /// Relative gap of the minimal values.
    pub value: f64,
    /// Largest distance between paired zeros.
    pub roots: f64,
}

impl Default for CertifyTolerance {
    fn default() -> Self {
        Self {
            value: 1e-4,
            roots: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub analytic_value: f64,
    pub oracle_value: f64,
    pub value_gap: f64,
    pub coeff_distance: f64,
    /// Largest distance between paired zeros; for a degenerate frame the
    /// zero in the gap is left out on both sides.
    pub root_distance: f64,
    /// On degenerate frames: the oracle's zero in `[alpha, beta]`, if any.
    pub oracle_gap_zero: Option<f64>,
    /// On degenerate frames: relative gap between the oracle value and `4 tau^N`.
    pub family_value_gap: Option<f64>,
    pub oracle: OracleResult,
    pub passed: bool,
}

pub fn certify(
    solution: &ExtremalSolution,
    cfg: &OracleConfig,
    tol: &CertifyTolerance,
) -> Result<CertificationReport> {
    let set = solution.set;
    let degree = solution.degree();
    let oracle = oracle_minimize(degree, &set, cfg)?;
    let value_gap = (solution.minimal_value - oracle.value).abs() / oracle.value;
    let coeff_distance = solution.f.coeff_distance(&oracle.coeffs);

    let (oracle_zeros, _) = sign_changes(
        &oracle.coeffs,
        -1.0 - 1e-9,
        1.0 + 1e-9,
        64 * (degree + 1),
    )?;
    let degenerate = solution.case.branch == Branch::Degenerate;
    let (ours, theirs, oracle_gap_zero) = if degenerate {
        let (ours, _) = split_gap_zero(&solution.zeros, &set, tol.roots);
        let (theirs, gap_zero) = split_gap_zero(&oracle_zeros, &set, tol.roots);
        (ours, theirs, gap_zero)
    } else {
        (solution.zeros.clone(), oracle_zeros, None)
    };
    let root_distance = if ours.len() == theirs.len() {
        ours.iter()
            .zip(&theirs)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    } else {
        f64::INFINITY
    };
    let family_value_gap = solution
        .family
        .as_ref()
        .map(|fam| (fam.value - oracle.value).abs() / oracle.value);
    let gap_ok = !degenerate || oracle_gap_zero.is_some();
    let family_ok = family_value_gap.is_none_or(|g| g <= tol.value);
    let passed = value_gap <= tol.value && root_distance <= tol.roots && gap_ok && family_ok;
    let report = CertificationReport {
        analytic_value: solution.minimal_value,
        oracle_value: oracle.value,
        value_gap,
        coeff_distance,
        root_distance,
        oracle_gap_zero,
        family_value_gap,
        oracle,
        passed,
    };
    if !passed {
        return Err(Error::Certification {
            reason: format!(
                "value gap {value_gap:.3e} (limit {:.1e}), root distance {root_distance:.3e} (limit {:.1e}){}{}",
                tol.value,
                tol.roots,
                if gap_ok { "" } else { ", no oracle zero in the gap" },
                if family_ok { "" } else { ", oracle value off the family value" }
            ),
            analytic: format!("{:?}", solution.f.descending()),
            oracle: format!("{:?}", report.oracle.coeffs.descending()),
        });
    }
    Ok(report)
}

/// Removes the zero in `[alpha - slack, beta + slack]` nearest the middle of
/// the gap.
fn split_gap_zero(zeros: &[f64], set: &TwoIntervalSet, slack: f64) -> (Vec<f64>, Option<f64>) {
    let mid = 0.5 * (set.alpha + set.beta);
    let gap_zero = zeros
        .iter()
        .copied()
        .filter(|z| *z >= set.alpha - slack && *z <= set.beta + slack)
        .min_by(|a, b| (a - mid).abs().total_cmp(&(b - mid).abs()));
    let mut rest = zeros.to_vec();
    if let Some(g) = gap_zero {
        let i = rest.iter().position(|z| *z == g).expect("zero taken from the list");
        rest.remove(i);
    }
    (rest, gap_zero)
}
