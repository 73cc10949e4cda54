use serde::Serialize;

use super::FeatureMatrix;
use crate::error::{Error, Result};
use crate::forecast::ridge_fit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum SelectorSpec {
    /// Keep the `k` columns with the largest absolute ridge coefficient.
    RidgeTopk { k: usize, alpha: f64 },
    /// Replace the columns by the leading `k` principal-component scores.
    PcaTopk { k: usize },
}

impl SelectorSpec {
    pub fn k(&self) -> usize {
        match *self {
            SelectorSpec::RidgeTopk { k, .. } | SelectorSpec::PcaTopk { k } => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedFeature {
    pub name: String,
    pub coefficient: f64,
}

/// Result of [`ridge_topk_select`]: the full ranking and the kept columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection {
    pub ranking: Vec<RankedFeature>,
    /// Column indices into the input matrix, best first.
    pub kept: Vec<usize>,
}

/// `|coefficient|` rounded to 12 significant digits, so coefficients that
/// differ only by solver round-off (exact duplicate columns) tie and fall
/// back to name order.
pub fn rank_key(coefficient: f64) -> f64 {
    format!("{:.11e}", coefficient.abs()).parse().unwrap_or(0.0)
}

/// Fits ridge on the first `train_rows` rows of a standardised matrix and
/// keeps the `k` columns with the largest `|coefficient|`; ties break by
/// column name.
pub fn ridge_topk_select(
    x: &FeatureMatrix,
    y: &[f64],
    train_rows: usize,
    k: usize,
    alpha: f64,
) -> Result<(FeatureMatrix, Selection)> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "selection alpha must be > 0, got {alpha}"
        )));
    }
    if k == 0 || k > x.ncols() {
        return Err(Error::InvalidArgument(format!(
            "cannot keep {k} of {} columns",
            x.ncols()
        )));
    }
    if y.len() < train_rows || train_rows > x.nrows() {
        return Err(Error::LengthMismatch {
            left: train_rows,
            right: y.len().min(x.nrows()),
        });
    }
    let train = x.data().rows(0, train_rows).into_owned();
    let model = ridge_fit(&train, &y[..train_rows], alpha)?;
    let names = x.names();
    let mut order: Vec<usize> = (0..x.ncols()).collect();
    order.sort_by(|&a, &b| {
        rank_key(model.coefficients[b])
            .total_cmp(&rank_key(model.coefficients[a]))
            .then_with(|| names[a].cmp(&names[b]))
    });
    let ranking = order
        .iter()
        .map(|&j| RankedFeature {
            name: names[j].clone(),
            coefficient: model.coefficients[j],
        })
        .collect();
    let kept: Vec<usize> = order[..k].to_vec();
    Ok((x.select_columns(&kept), Selection { ranking, kept }))
}
