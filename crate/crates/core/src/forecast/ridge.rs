use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// The regularisation grid used for model tuning.
pub const ALPHA_GRID: [f64; 11] = [
    1.0 / 32.0,
    1.0 / 16.0,
    1.0 / 8.0,
    1.0 / 4.0,
    1.0 / 2.0,
    1.0,
    2.0,
    4.0,
    8.0,
    16.0,
    32.0,
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RidgeModel {
    pub alpha: f64,
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

impl RidgeModel {
    pub fn predict_row(&self, row: impl IntoIterator<Item = f64>) -> f64 {
        self.intercept
            + row
                .into_iter()
                .zip(&self.coefficients)
                .map(|(x, b)| x * b)
                .sum::<f64>()
    }

    pub fn predict(&self, x: &DMatrix<f64>) -> Vec<f64> {
        (0..x.nrows())
            .map(|i| self.predict_row(x.row(i).iter().copied()))
            .collect()
    }
}

/// Centred normal equations `X_c' X_c` and `X_c' y_c`, reusable across a
/// grid of penalties.
#[derive(Debug, Clone)]
pub struct RidgeProblem {
    gram: DMatrix<f64>,
    xty: DVector<f64>,
    x_means: DVector<f64>,
    y_mean: f64,
}

impl RidgeProblem {
    pub fn new(x: &DMatrix<f64>, y: &[f64]) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.nrows(),
                right: y.len(),
            });
        }
        if x.nrows() == 0 {
            return Err(Error::InvalidArgument("ridge needs at least one row".into()));
        }
        crate::error::ensure_finite(x.as_slice())?;
        crate::error::ensure_finite(y)?;
        let n = x.nrows() as f64;
        let x_means = DVector::from_iterator(x.ncols(), x.column_iter().map(|c| c.sum() / n));
        let y_mean = y.iter().sum::<f64>() / n;
        let mut xc = x.clone();
        for (j, mut col) in xc.column_iter_mut().enumerate() {
            col.add_scalar_mut(-x_means[j]);
        }
        let yc = DVector::from_iterator(y.len(), y.iter().map(|v| v - y_mean));
        Ok(RidgeProblem {
            gram: xc.tr_mul(&xc),
            xty: xc.tr_mul(&yc),
            x_means,
            y_mean,
        })
    }

    /// Solves `(X_c' X_c + alpha I) b = X_c' y_c` by Cholesky.
    pub fn solve(&self, alpha: f64) -> Result<RidgeModel> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "ridge alpha must be finite and > 0, got {alpha}"
            )));
        }
        let mut a = self.gram.clone();
        for i in 0..a.nrows() {
            a[(i, i)] += alpha;
        }
        let chol = a
            .cholesky()
            .ok_or_else(|| Error::Linalg("regularised Gram matrix is not positive definite".into()))?;
        let beta = chol.solve(&self.xty);
        let intercept = self.y_mean - self.x_means.dot(&beta);
        Ok(RidgeModel {
            alpha,
            coefficients: beta.iter().copied().collect(),
            intercept,
        })
    }
}

/// Ridge regression with an unpenalised intercept.
pub fn ridge_fit(x: &DMatrix<f64>, y: &[f64], alpha: f64) -> Result<RidgeModel> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ridge alpha must be > 0, got {alpha}"
        )));
    }
    RidgeProblem::new(x, y)?.solve(alpha)
}
