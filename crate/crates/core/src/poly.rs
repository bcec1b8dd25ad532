//! Monic polynomials with optional product-form evaluation, and a
//! least-squares fit in a Chebyshev basis.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A real monic polynomial.
///
/// Coefficients are stored in ascending order with `coeffs[degree] == 1`.
/// When the real zeros are known they are kept alongside and used for
/// evaluation, which is far better conditioned than Horner's rule near
/// clustered zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial {
    coeffs: Vec<f64>,
    roots: Option<Vec<f64>>,
}

impl MonicPolynomial {
    pub fn one() -> Self {
        Self {
            coeffs: vec![1.0],
            roots: Some(Vec::new()),
        }
    }

    pub fn from_roots(roots: &[f64]) -> Self {
        let mut coeffs = vec![1.0];
        for &r in roots {
            coeffs = multiply(&coeffs, &[-r, 1.0]);
        }
        let mut sorted = roots.to_vec();
        sorted.sort_by(f64::total_cmp);
        Self {
            coeffs,
            roots: Some(sorted),
        }
    }

    /// Divide through by the leading coefficient.
    pub fn from_coeffs(ascending: &[f64]) -> Result<Self> {
        let lead = *ascending
            .last()
            .ok_or_else(|| Error::InvalidInput("empty coefficient vector".into()))?;
        if lead == 0.0 || !lead.is_finite() {
            return Err(Error::InvalidInput(format!(
                "leading coefficient {lead} cannot be normalized"
            )));
        }
        let coeffs: Vec<f64> = ascending.iter().map(|c| c / lead).collect();
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        Ok(Self {
            coeffs,
            roots: None,
        })
    }

    pub fn from_descending(descending: &[f64]) -> Result<Self> {
        let ascending: Vec<f64> = descending.iter().rev().copied().collect();
        Self::from_coeffs(&ascending)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn descending(&self) -> Vec<f64> {
        self.coeffs.iter().rev().copied().collect()
    }

    pub fn roots(&self) -> Option<&[f64]> {
        self.roots.as_deref()
    }

    /// Re-normalize by the leading coefficient; a no-op on monic input.
    pub fn normalized(&self) -> Self {
        Self::from_coeffs(&self.coeffs).map_or_else(
            |_| self.clone(),
            |mut p| {
                p.roots = self.roots.clone();
                p
            },
        )
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.roots {
            Some(roots) => roots.iter().map(|r| x - r).product(),
            None => self.eval_horner(x),
        }
    }

    pub fn eval_horner(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative_at(&self, x: f64) -> f64 {
        match &self.roots {
            Some(roots) => (0..roots.len())
                .map(|skip| {
                    roots
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, r)| x - r)
                        .product::<f64>()
                })
                .sum(),
            None => self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (i, c)| acc * x + i as f64 * c),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let roots = match (&self.roots, &other.roots) {
            (Some(a), Some(b)) => {
                let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
                all.sort_by(f64::total_cmp);
                Some(all)
            }
            _ => None,
        };
        Self {
            coeffs: multiply(&self.coeffs, &other.coeffs),
            roots,
        }
    }

    /// Largest coefficient difference, both in ascending order.
    pub fn coeff_distance(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0.0);
                let b = other.coeffs.get(i).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Product of two ascending coefficient vectors.
pub fn multiply(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `a - b` for ascending coefficient vectors.
pub fn subtract(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0))
        .collect()
}

/// `prod (x - r)` as ascending coefficients.
pub fn from_linear_factors(roots: &[f64]) -> Vec<f64> {
    roots.iter().fold(vec![1.0], |acc, &r| multiply(&acc, &[-r, 1.0]))
}

/// Outcome of a Chebyshev least-squares fit.
#[derive(Debug, Clone)]
pub struct ChebyshevFit {
    pub poly: MonicPolynomial,
    /// Max misfit at the held-out points relative to the largest held-out value.
    pub holdout_residual: f64,
}

/// Half-width of the fitting window `[-FIT_SCALE, FIT_SCALE]`.
pub const FIT_SCALE: f64 = 3.0;

/// Fit a degree-`degree` polynomial to `(xs, ys)` in the Chebyshev basis on
/// `[-3, 3]`, then normalize it to be monic. The held-out points measure
/// the quality of the fit; a residual above `limit` is an error.
pub fn fit_monic_chebyshev(
    xs: &[f64],
    ys: &[f64],
    holdout_xs: &[f64],
    holdout_ys: &[f64],
    degree: usize,
    limit: f64,
) -> Result<ChebyshevFit> {
    if xs.len() != ys.len() || xs.len() <= degree {
        return Err(Error::InvalidInput(format!(
            "{} samples cannot determine a degree-{degree} fit",
            xs.len()
        )));
    }
    let basis = |x: f64| chebyshev_row(x / FIT_SCALE, degree);
    let mut design = DMatrix::zeros(xs.len(), degree + 1);
    for (i, &x) in xs.iter().enumerate() {
        for (j, t) in basis(x).into_iter().enumerate() {
            design[(i, j)] = t;
        }
    }
    let rhs = DVector::from_column_slice(ys);
    let svd = design.svd(true, true);
    let cheb = svd
        .solve(&rhs, 1e-15)
        .map_err(|e| Error::InvalidInput(format!("least squares failed: {e}")))?;

    let eval = |x: f64| -> f64 {
        basis(x)
            .into_iter()
            .zip(cheb.iter())
            .map(|(t, c)| t * c)
            .sum()
    };
    let scale = holdout_ys.iter().fold(0.0_f64, |m, y| m.max(y.abs()));
    let misfit = holdout_xs
        .iter()
        .zip(holdout_ys)
        .fold(0.0_f64, |m, (&x, &y)| m.max((eval(x) - y).abs()));
    let holdout_residual = if scale > 0.0 { misfit / scale } else { misfit };
    if holdout_residual > limit {
        return Err(Error::Conditioning {
            residual: holdout_residual,
            limit,
        });
    }

    // Chebyshev coefficients in t = x / 3 to monomials in x.
    let mut monomial = vec![0.0; degree + 1];
    let (mut prev, mut cur) = (vec![1.0], vec![0.0, 1.0]);
    for (j, c) in cheb.iter().enumerate() {
        let tj: &[f64] = match j {
            0 => &prev,
            1 => &cur,
            _ => {
                let next = subtract(&multiply(&[0.0, 2.0], &cur), &prev);
                prev = std::mem::replace(&mut cur, next);
                &cur
            }
        };
        for (i, t) in tj.iter().enumerate() {
            monomial[i] += c * t / FIT_SCALE.powi(i as i32);
        }
    }
    Ok(ChebyshevFit {
        poly: MonicPolynomial::from_coeffs(&monomial)?,
        holdout_residual,
    })
}

fn chebyshev_row(t: f64, degree: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(degree + 1);
    row.push(1.0);
    if degree >= 1 {
        row.push(t);
    }
    for j in 2..=degree {
        row.push(2.0 * t * row[j - 1] - row[j - 2]);
    }
    row
}
