//! Forecast accuracy metrics.

use serde::Serialize;

use crate::error::{Error, Result};

/// Denominator convention for [`smape_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmapeForm {
    /// `(|pred| + |actual|) / 2`. Bounded in `[0, 200]` percent.
    #[default]
    Plus,
    /// `(|pred| - |actual|) / 2`, kept only for auditing results computed
    /// with that formula. Unbounded and sign-indefinite.
    Minus,
}

/// Symmetric mean absolute percentage error, in percent.
///
/// Terms whose denominator is zero contribute zero.
pub fn smape(pred: &[f64], actual: &[f64]) -> Result<f64> {
    smape_with(pred, actual, SmapeForm::Plus)
}

pub fn smape_with(pred: &[f64], actual: &[f64], form: SmapeForm) -> Result<f64> {
    if pred.len() != actual.len() {
        return Err(Error::LengthMismatch {
            left: pred.len(),
            right: actual.len(),
        });
    }
    if pred.is_empty() {
        return Err(Error::InvalidArgument("SMAPE of an empty series".into()));
    }
    crate::error::ensure_finite(pred)?;
    crate::error::ensure_finite(actual)?;
    let total: f64 = pred
        .iter()
        .zip(actual)
        .map(|(p, a)| {
            let denom = match form {
                SmapeForm::Plus => (p.abs() + a.abs()) / 2.0,
                SmapeForm::Minus => (p.abs() - a.abs()) / 2.0,
            };
            if denom == 0.0 {
                0.0
            } else {
                (p - a).abs() / denom
            }
        })
        .sum();
    Ok(100.0 * total / pred.len() as f64)
}

/// Mean and standard error of a set of per-series scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoreSummary {
    pub mean_smape_pct: f64,
    /// Sample standard deviation over `sqrt(n)`; `NaN` when `n < 2`.
    pub se_pct: f64,
    pub n: usize,
}

impl ScoreSummary {
    pub fn from_scores(scores: &[f64]) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::InvalidArgument("no scores to summarise".into()));
        }
        let n = scores.len();
        let mean = scores.iter().sum::<f64>() / n as f64;
        let se_pct = if n < 2 {
            f64::NAN
        } else {
            let var = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            var.sqrt() / (n as f64).sqrt()
        };
        Ok(ScoreSummary {
            mean_smape_pct: mean,
            se_pct,
            n,
        })
    }
}
