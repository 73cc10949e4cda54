use nalgebra::DMatrix;
use serde::Serialize;

use super::FeatureMatrix;

// Columns whose sd is below this fraction of |mean| are treated as constant.
const RELATIVE_CONSTANT_TOL: f64 = 1e-14;

fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.map(|v| (v - mean).powi(2)).sum();
    let sd = (ss / (n - 1) as f64).sqrt();
    if sd <= RELATIVE_CONSTANT_TOL * mean.abs() {
        (mean, 0.0)
    } else {
        (mean, sd)
    }
}

/// Per-column training mean and sample standard deviation (`n - 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Normalizer {
    pub names: Vec<String>,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl Normalizer {
    /// Fits on the first `train_rows` rows.
    pub fn fit(x: &FeatureMatrix, train_rows: usize) -> Normalizer {
        let data = x.data();
        let (means, sds) = (0..x.ncols())
            .map(|j| mean_sd(data.column(j).rows(0, train_rows).iter().copied()))
            .unzip();
        Normalizer {
            names: x.names().to_vec(),
            means,
            sds,
        }
    }

    /// Standardises every row with the fitted statistics. Zero-variance
    /// columns become all zeros.
    pub fn apply(&self, x: &FeatureMatrix) -> FeatureMatrix {
        let data = x.data();
        let out = DMatrix::from_fn(data.nrows(), data.ncols(), |i, j| {
            if self.sds[j] == 0.0 {
                0.0
            } else {
                (data[(i, j)] - self.means[j]) / self.sds[j]
            }
        });
        x.with_columns(x.names().to_vec(), out)
            .expect("shape preserved")
    }
}

/// Fits on the first `train_rows` rows and transforms all rows.
pub fn zscore(x: &FeatureMatrix, train_rows: usize) -> (FeatureMatrix, Normalizer) {
    let norm = Normalizer::fit(x, train_rows);
    (norm.apply(x), norm)
}

/// Standardisation of the regression target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TargetScaler {
    pub mean: f64,
    pub sd: f64,
}

impl TargetScaler {
    pub fn fit(y: &[f64]) -> TargetScaler {
        let (mean, sd) = mean_sd(y.iter().copied());
        TargetScaler { mean, sd }
    }

    pub fn forward(&self, y: f64) -> f64 {
        if self.sd == 0.0 {
            0.0
        } else {
            (y - self.mean) / self.sd
        }
    }

    pub fn inverse(&self, z: f64) -> f64 {
        if self.sd == 0.0 {
            self.mean
        } else {
            self.mean + self.sd * z
        }
    }
}
