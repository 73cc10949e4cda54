use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::persistence::{persistence_forecast, rolling_persistence};
use super::pipeline::{
    check_candidates, cv_select_wavelet, fit_and_forecast, CandidateScore, FeatureSetSpec,
    FittedHorizon, HorizonMode, SplitSpec,
};
use super::report::ForecastReport;
use crate::error::{ensure_finite, Error, Result};
use crate::featureset::SelectorSpec;
use crate::metrics::smape;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ModelKind {
    Ridge,
    Persistence,
}

impl ModelKind {
    pub const SUPPORTED: &'static str = "ridge, persistence";

    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Ridge => "Ridge",
            ModelKind::Persistence => "Persistence",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ridge" => Ok(ModelKind::Ridge),
            "persistence" => Ok(ModelKind::Persistence),
            other => Err(Error::InvalidArgument(format!(
                "unknown model '{other}' (supported: {})",
                ModelKind::SUPPORTED
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedSeries {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub series: Vec<NamedSeries>,
    pub feature_sets: Vec<FeatureSetSpec>,
    pub models: Vec<ModelKind>,
    pub candidates: Vec<u32>,
    pub split: SplitSpec,
    pub alphas: Vec<f64>,
}

impl ExperimentSpec {
    /// Rejects inconsistent configurations before any model is fitted.
    pub fn validate(&self) -> Result<()> {
        if self.series.is_empty() {
            return Err(Error::InvalidArgument("no input series".into()));
        }
        if self.feature_sets.is_empty() || self.models.is_empty() {
            return Err(Error::InvalidArgument(
                "need at least one feature set and one model".into(),
            ));
        }
        if self.alphas.is_empty() || self.alphas.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidArgument(
                "ridge alphas must be a non-empty list of positive numbers".into(),
            ));
        }
        let uses_wavelets = self.feature_sets.iter().any(|f| f.kind != super::FeatureSetKind::Lags);
        if uses_wavelets {
            check_candidates(&self.candidates)?;
        }
        let mut kinds: Vec<_> = self.feature_sets.iter().map(|f| f.kind).collect();
        kinds.sort_by_key(|k| *k as u8);
        kinds.dedup();
        if kinds.len() != self.feature_sets.len() {
            return Err(Error::InvalidArgument("duplicate feature set".into()));
        }
        let mut models = self.models.clone();
        models.sort_by_key(|m| *m as u8);
        models.dedup();
        if models.len() != self.models.len() {
            return Err(Error::InvalidArgument("duplicate model".into()));
        }
        for s in &self.series {
            self.split.validate(s.values.len()).map_err(|e| {
                Error::InvalidArgument(format!("series '{}': {e}", s.name))
            })?;
            ensure_finite(&s.values)?;
        }
        for fs in &self.feature_sets {
            fs.validate(&self.candidates)?;
            let inner_rows = (self.split.inner_train_end() + 1)
                .saturating_sub(fs.first_row_time() + self.split.horizon_mode.max_horizon());
            let needed_rows = match fs.selector {
                Some(SelectorSpec::PcaTopk { k }) => k.max(2),
                _ => 2,
            };
            if inner_rows < needed_rows {
                return Err(Error::InvalidArgument(format!(
                    "{} feature set leaves {inner_rows} fitting rows before the validation tail",
                    fs.kind
                )));
            }
        }
        Ok(())
    }
}

/// Result of one (series, model, feature set) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub series: String,
    pub model: ModelKind,
    pub feature_set: super::FeatureSetKind,
    pub wavelet: Option<u32>,
    pub alpha: Option<f64>,
    pub smape: f64,
    pub cv_table: Vec<CandidateScore>,
    pub target_times: Vec<usize>,
    pub predictions: Vec<f64>,
    pub actuals: Vec<f64>,
    pub fitted: Vec<FittedHorizon>,
}

fn ridge_cell(spec: &ExperimentSpec, series: &NamedSeries, fs: &FeatureSetSpec) -> Result<CellResult> {
    let split = &spec.split;
    let values = &series.values[..split.train_len + split.test_len];
    let (wavelet, alpha, cv_table) = if fs.kind == super::FeatureSetKind::Lags {
        let tuned = fit_and_forecast(
            fs,
            &values[..split.train_len],
            None,
            &spec.alphas,
            split.inner_train_end(),
            split.train_len,
            split.horizon_mode,
        )?;
        (None, tuned.alpha, Vec::new())
    } else {
        let cv = cv_select_wavelet(values, &spec.candidates, fs, &spec.alphas, split)?;
        (Some(cv.chosen), cv.chosen_alpha, cv.table)
    };
    // Refit normalisation, selection and the model on the full training
    // segment with the tuned settings.
    let outcome = fit_and_forecast(
        fs,
        values,
        wavelet,
        &[alpha],
        split.train_len,
        split.train_len + split.test_len,
        split.horizon_mode,
    )?;
    Ok(CellResult {
        series: series.name.clone(),
        model: ModelKind::Ridge,
        feature_set: fs.kind,
        wavelet,
        alpha: Some(alpha),
        smape: outcome.smape,
        cv_table,
        target_times: outcome.target_times,
        predictions: outcome.predictions,
        actuals: outcome.actuals,
        fitted: outcome.fitted,
    })
}

fn persistence_cell(spec: &ExperimentSpec, series: &NamedSeries, fs: &FeatureSetSpec) -> Result<CellResult> {
    let split = &spec.split;
    let y = &series.values;
    let (target_times, predictions): (Vec<usize>, Vec<f64>) = match split.horizon_mode {
        HorizonMode::OneStep => {
            let first = split.train_len + 1;
            let last = split.train_len + split.test_len;
            ((first..=last).collect(), rolling_persistence(y, first, last)?)
        }
        HorizonMode::MultiHorizon(h) => (
            (split.train_len + 1..=split.train_len + h).collect(),
            persistence_forecast(&y[..split.train_len], h)?,
        ),
    };
    let actuals: Vec<f64> = target_times.iter().map(|&t| y[t - 1]).collect();
    Ok(CellResult {
        series: series.name.clone(),
        model: ModelKind::Persistence,
        feature_set: fs.kind,
        wavelet: None,
        alpha: None,
        smape: smape(&predictions, &actuals)?,
        cv_table: Vec::new(),
        target_times,
        predictions,
        actuals,
        fitted: Vec::new(),
    })
}

/// Runs every (series, model, feature set) cell on a pool of `jobs`
/// threads. Output order and every value are independent of `jobs`.
pub fn run_experiment(spec: &ExperimentSpec, jobs: usize) -> Result<ForecastReport> {
    spec.validate()?;
    let mut cells = Vec::new();
    for series in &spec.series {
        for &model in &spec.models {
            for fs in &spec.feature_sets {
                cells.push((series, model, fs));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let results = pool.install(|| {
        cells
            .par_iter()
            .map(|&(series, model, fs)| match model {
                ModelKind::Ridge => ridge_cell(spec, series, fs),
                ModelKind::Persistence => persistence_cell(spec, series, fs),
            })
            .collect::<Result<Vec<_>>>()
    })?;
    ForecastReport::assemble(&spec.models, &spec.feature_sets, results)
}
