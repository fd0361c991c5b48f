//! Deterministic linear least-squares backend (OLS and ridge).
//!
//! The fit centres every column, forms the normal equations of the centred
//! problem, and solves them by LU with partial pivoting. Centring leaves the
//! intercept out of the penalty, so ridge with `lambda = 0` is exactly OLS.
//! All reductions run left to right in row order; there is no internal
//! parallelism, so the fit is bit-stable for a given input on a given platform.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::check_finite;

const LOGGER: &str = "safeforecast.regress";

/// OLS fits whose normal matrix has a 1-norm condition number above this are
/// rejected as singular.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegressorKind {
    Ols,
    Ridge { lambda: f64 },
}

/// Backend selection. `seed` is carried for interface uniformity with
/// stochastic backends; the least-squares solvers ignore it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressorSpec {
    pub kind: RegressorKind,
    pub seed: u64,
}

impl RegressorSpec {
    pub fn ols(seed: u64) -> Self {
        RegressorSpec {
            kind: RegressorKind::Ols,
            seed,
        }
    }

    pub fn ridge(lambda: f64, seed: u64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "ridge lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(RegressorSpec {
            kind: RegressorKind::Ridge { lambda },
            seed,
        })
    }

    /// Short backend label, e.g. `ols` or `ridge(0.1)`.
    pub fn label(&self) -> String {
        match self.kind {
            RegressorKind::Ols => "ols".into(),
            RegressorKind::Ridge { lambda } => format!("ridge({lambda})"),
        }
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Matrix::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Fitted linear model `y = intercept + coefficients · x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedRegressor {
    coefficients: Vec<f64>,
    intercept: f64,
}

impl FittedRegressor {
    pub fn new(coefficients: Vec<f64>, intercept: f64) -> Result<Self> {
        check_finite(&coefficients, LOGGER, "model")?;
        check_finite(&[intercept], LOGGER, "model")?;
        Ok(FittedRegressor {
            coefficients,
            intercept,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn feature_count(&self) -> usize {
        self.coefficients.len()
    }

    /// Prediction without input checks; callers guarantee length and finiteness.
    #[inline]
    pub(crate) fn predict_unchecked(&self, x: &[f64]) -> f64 {
        self.coefficients
            .iter()
            .zip(x)
            .fold(self.intercept, |acc, (b, v)| acc + b * v)
    }
}

pub fn predict_regressor(r: &FittedRegressor, x: &[f64]) -> Result<f64> {
    if x.len() != r.feature_count() {
        return Err(Error::DimensionMismatch {
            expected: r.feature_count(),
            actual: x.len(),
        });
    }
    check_finite(x, LOGGER, "predict")?;
    Ok(r.predict_unchecked(x))
}

/// Least-squares fit of `y` on `x` with an unpenalized intercept.
pub fn fit_regressor(spec: &RegressorSpec, x: &Matrix, y: &[f64]) -> Result<FittedRegressor> {
    if x.rows() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.rows(),
            actual: y.len(),
        });
    }
    if y.is_empty() {
        return Err(Error::TooShort("regression needs at least one row".into()));
    }
    check_finite(x.as_slice(), LOGGER, "fit")?;
    check_finite(y, LOGGER, "fit")?;

    let (n, p) = (x.rows(), x.cols());
    let nf = n as f64;
    let mut x_mean = vec![0.0; p];
    for i in 0..n {
        for (m, v) in x_mean.iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    x_mean.iter_mut().for_each(|m| *m /= nf);
    let y_mean = y.iter().fold(0.0, |a, v| a + v) / nf;

    // upper triangle of Xc'Xc, accumulated row by row
    let mut gram = vec![0.0; p * p];
    let mut rhs = vec![0.0; p];
    let mut xc = vec![0.0; p];
    for (i, &yi) in y.iter().enumerate() {
        for ((c, v), m) in xc.iter_mut().zip(x.row(i)).zip(&x_mean) {
            *c = v - m;
        }
        let yc = yi - y_mean;
        for a in 0..p {
            let xa = xc[a];
            rhs[a] += xa * yc;
            let row = &mut gram[a * p..(a + 1) * p];
            for b in a..p {
                row[b] += xa * xc[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            gram[a * p + b] = gram[b * p + a];
        }
    }

    let check_condition = match spec.kind {
        RegressorKind::Ols => true,
        RegressorKind::Ridge { lambda } => {
            if !(lambda >= 0.0 && lambda.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "invalid ridge lambda {lambda}"
                )));
            }
            for a in 0..p {
                gram[a * p + a] += lambda;
            }
            lambda == 0.0
        }
    };

    let coefficients = if p == 0 {
        Vec::new()
    } else {
        let norm = one_norm(&gram, p);
        let lu = Lu::factor(gram, p);
        if check_condition {
            let condition = match &lu {
                None => f64::INFINITY,
                Some(lu) => norm * lu.inverse_one_norm(),
            };
            if condition.is_nan() || condition > CONDITION_LIMIT {
                return Err(Error::SingularSystem { condition });
            }
        }
        match lu {
            Some(lu) => lu.solve(&rhs),
            None => {
                return Err(Error::SingularSystem {
                    condition: f64::INFINITY,
                })
            }
        }
    };

    let intercept = coefficients
        .iter()
        .zip(&x_mean)
        .fold(y_mean, |acc, (b, m)| acc - b * m);
    FittedRegressor::new(coefficients, intercept)
}

fn one_norm(a: &[f64], p: usize) -> f64 {
    (0..p)
        .map(|j| (0..p).fold(0.0, |s, i| s + a[i * p + j].abs()))
        .fold(0.0, f64::max)
}

/// LU factorisation `PA = LU` with partial pivoting. Ties between candidate
/// pivots resolve to the lowest row index.
struct Lu {
    p: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(mut a: Vec<f64>, p: usize) -> Option<Lu> {
        let mut perm: Vec<usize> = (0..p).collect();
        for k in 0..p {
            let mut piv = k;
            let mut best = a[k * p + k].abs();
            for i in k + 1..p {
                let v = a[i * p + k].abs();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return None;
            }
            if piv != k {
                for j in 0..p {
                    a.swap(k * p + j, piv * p + j);
                }
                perm.swap(k, piv);
            }
            let d = a[k * p + k];
            for i in k + 1..p {
                let f = a[i * p + k] / d;
                a[i * p + k] = f;
                if f != 0.0 {
                    for j in k + 1..p {
                        a[i * p + j] -= f * a[k * p + j];
                    }
                }
            }
        }
        Some(Lu { p, lu: a, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let p = self.p;
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..p {
            let row = &self.lu[i * p..i * p + i];
            x[i] = row.iter().zip(&x[..i]).fold(x[i], |s, (l, v)| s - l * v);
        }
        for i in (0..p).rev() {
            let row = &self.lu[i * p + i + 1..(i + 1) * p];
            let s = row
                .iter()
                .zip(&x[i + 1..])
                .fold(x[i], |s, (l, v)| s - l * v);
            x[i] = s / self.lu[i * p + i];
        }
        x
    }

    /// ‖A⁻¹‖₁, from the columns A⁻¹ e_j.
    fn inverse_one_norm(&self) -> f64 {
        let mut e = vec![0.0; self.p];
        let mut best = 0.0f64;
        for j in 0..self.p {
            e[j] = 1.0;
            let col = self.solve(&e);
            e[j] = 0.0;
            let s = col.iter().fold(0.0, |acc, v| acc + v.abs());
            if !s.is_finite() {
                return f64::INFINITY;
            }
            best = best.max(s);
        }
        best
    }
}
