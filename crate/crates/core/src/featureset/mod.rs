//! Time-aligned feature matrices built from lags and wavelet coefficients.
//!
//! Row `t` (one-based time index) only uses observations `y_1..=y_t` and
//! is paired with the target `y_{t+h}`. Rows with an undefined lag or an
//! unavailable target are dropped, so rows are contiguous in `t`.

mod normalize;
mod pca;
mod select;

pub use normalize::{zscore, Normalizer, TargetScaler};
pub use pca::{pca_topk, PcaModel};
pub use select::{rank_key, ridge_topk_select, RankedFeature, Selection, SelectorSpec};

use nalgebra::DMatrix;

use crate::error::{ensure_finite, Error, Result};
use crate::transform::{transform_series, Mode, NodeId, TransformConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    names: Vec<String>,
    times: Vec<usize>,
    data: DMatrix<f64>,
    targets: Vec<f64>,
    horizon: usize,
}

impl FeatureMatrix {
    pub fn new(
        names: Vec<String>,
        times: Vec<usize>,
        data: DMatrix<f64>,
        targets: Vec<f64>,
        horizon: usize,
    ) -> Result<Self> {
        if data.ncols() != names.len() {
            return Err(Error::LengthMismatch {
                left: data.ncols(),
                right: names.len(),
            });
        }
        if data.nrows() != times.len() || times.len() != targets.len() {
            return Err(Error::LengthMismatch {
                left: data.nrows(),
                right: times.len().min(targets.len()),
            });
        }
        let mut sorted: Vec<&String> = names.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("duplicate column name '{}'", w[0])));
        }
        Ok(FeatureMatrix {
            names,
            times,
            data,
            targets,
            horizon,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// One-based time index of each row.
    pub fn times(&self) -> &[usize] {
        &self.times
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// `y_{t+h}` for each row.
    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.names.iter().position(|n| n == name)?;
        Some(self.data.column(j).iter().copied().collect())
    }

    /// Number of leading rows whose target time `t + h` is at most `last`.
    pub fn rows_with_target_through(&self, last: usize) -> usize {
        self.times.partition_point(|&t| t + self.horizon <= last)
    }

    /// Row index whose feature time equals `t`.
    pub fn row_at_time(&self, t: usize) -> Option<usize> {
        self.times.binary_search(&t).ok()
    }

    /// Keeps the listed columns in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            names: columns.iter().map(|&j| self.names[j].clone()).collect(),
            times: self.times.clone(),
            data: self.data.select_columns(columns),
            targets: self.targets.clone(),
            horizon: self.horizon,
        }
    }

    /// Same rows and targets with replacement columns.
    pub fn with_columns(&self, names: Vec<String>, data: DMatrix<f64>) -> Result<FeatureMatrix> {
        FeatureMatrix::new(names, self.times.clone(), data, self.targets.clone(), self.horizon)
    }

    /// First `n` rows.
    pub fn head(&self, n: usize) -> FeatureMatrix {
        FeatureMatrix {
            names: self.names.clone(),
            times: self.times[..n].to_vec(),
            data: self.data.rows(0, n).into_owned(),
            targets: self.targets[..n].to_vec(),
            horizon: self.horizon,
        }
    }
}

fn check_shape(len: usize, lags: usize, horizon: usize) -> Result<()> {
    if lags == 0 || horizon == 0 {
        return Err(Error::InvalidArgument(
            "lag count and horizon must both be at least 1".into(),
        ));
    }
    let needed = lags + horizon;
    if len < needed {
        return Err(Error::InsufficientLength { needed, got: len });
    }
    Ok(())
}

// Lags 1..=lags of every sequence, lag 1 being the value at time t.
fn lagged(
    sequences: &[(String, &[f64])],
    series: &[f64],
    lags: usize,
    horizon: usize,
) -> Result<FeatureMatrix> {
    check_shape(series.len(), lags, horizon)?;
    let times: Vec<usize> = (lags..=series.len() - horizon).collect();
    let names: Vec<String> = sequences
        .iter()
        .flat_map(|(prefix, _)| (1..=lags).map(move |j| format!("{prefix}lag.{j}")))
        .collect();
    let mut data = DMatrix::zeros(times.len(), names.len());
    for (s, (_, seq)) in sequences.iter().enumerate() {
        for j in 1..=lags {
            let mut col = data.column_mut(s * lags + j - 1);
            for (r, &t) in times.iter().enumerate() {
                col[r] = seq[t - j];
            }
        }
    }
    let targets = times.iter().map(|&t| series[t + horizon - 1]).collect();
    FeatureMatrix::new(names, times, data, targets, horizon)
}

/// Lag columns `lag.1..=lag.max_lag` of the raw series.
pub fn lag_matrix(series: &[f64], max_lag: usize, horizon: usize) -> Result<FeatureMatrix> {
    ensure_finite(series)?;
    lagged(&[(String::new(), series)], series, max_lag, horizon)
}

/// Coefficient sequences used as features for a transform configuration.
///
/// NDWT: the detail at every level, the coarsest smooth, then the raw
/// series (`L + 2` sequences). NWPT: every packet at every level, then the
/// raw series (`2^(L+1) - 1` sequences).
pub fn feature_sequences(config: &TransformConfig) -> Vec<Option<NodeId>> {
    let mut nodes: Vec<Option<NodeId>> = match config.mode() {
        Mode::Ndwt => (1..=config.levels())
            .map(|level| Some(NodeId::Detail { level }))
            .chain(std::iter::once(Some(NodeId::Smooth {
                level: config.levels(),
            })))
            .collect(),
        Mode::Nwpt => config.nodes().into_iter().map(Some).collect(),
    };
    nodes.push(None);
    nodes
}

fn sequence_prefix(mode: Mode, node: Option<NodeId>) -> String {
    match node {
        Some(n) => format!("{}.{n}.", mode.as_str()),
        None => "series.".to_string(),
    }
}

/// Lagged wavelet-coefficient features; see [`feature_sequences`].
pub fn coefficient_features(
    series: &[f64],
    config: &TransformConfig,
    lags_per_vector: usize,
    horizon: usize,
) -> Result<FeatureMatrix> {
    check_shape(series.len(), lags_per_vector, horizon)?;
    let coeffs = transform_series(config, series)?;
    let sequences: Vec<(String, &[f64])> = feature_sequences(config)
        .into_iter()
        .map(|node| {
            let seq = match node {
                Some(n) => coeffs.column(n).expect("configured node"),
                None => series,
            };
            (sequence_prefix(config.mode(), node), seq)
        })
        .collect();
    lagged(&sequences, series, lags_per_vector, horizon)
}
