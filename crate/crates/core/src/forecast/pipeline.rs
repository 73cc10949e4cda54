//! Fit-and-score machinery shared by wavelet-number cross-validation and
//! the final test evaluation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::ridge::{RidgeModel, RidgeProblem};
use crate::error::{Error, Result};
use crate::featureset::{
    coefficient_features, lag_matrix, pca_topk, ridge_topk_select, zscore, FeatureMatrix,
    Normalizer, RankedFeature, PcaModel, SelectorSpec, TargetScaler,
};
use crate::filterbank::{daubechies_filter, MAX_NUMBER, MIN_NUMBER};
use crate::metrics::smape;
use crate::transform::{Mode, TransformConfig, DEFAULT_BUFFER_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSetKind {
    Lags,
    Ndwt,
    Nwpt,
}

impl FeatureSetKind {
    pub fn label(self) -> &'static str {
        match self {
            FeatureSetKind::Lags => "Lags",
            FeatureSetKind::Ndwt => "NDWT",
            FeatureSetKind::Nwpt => "NWPT",
        }
    }
}

impl fmt::Display for FeatureSetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FeatureSetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lags" => Ok(FeatureSetKind::Lags),
            "ndwt" => Ok(FeatureSetKind::Ndwt),
            "nwpt" => Ok(FeatureSetKind::Nwpt),
            other => Err(Error::InvalidArgument(format!(
                "unknown feature set '{other}' (supported: lags, ndwt, nwpt)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum HorizonMode {
    OneStep,
    /// Direct strategy: one model per horizon `1..=H`, all forecasting
    /// from the same origin.
    MultiHorizon(usize),
}

impl HorizonMode {
    pub fn max_horizon(self) -> usize {
        match self {
            HorizonMode::OneStep => 1,
            HorizonMode::MultiHorizon(h) => h,
        }
    }
}

/// Contiguous train / test segments; the validation tail is the end of
/// the training segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitSpec {
    pub train_len: usize,
    pub valid_tail_len: usize,
    pub test_len: usize,
    pub horizon_mode: HorizonMode,
}

impl SplitSpec {
    pub fn validate(&self, series_len: usize) -> Result<()> {
        if self.valid_tail_len == 0 || self.test_len == 0 {
            return Err(Error::InvalidArgument(
                "validation tail and test segment must be non-empty".into(),
            ));
        }
        if self.valid_tail_len >= self.train_len {
            return Err(Error::InvalidArgument(format!(
                "validation tail ({}) must be shorter than the training segment ({})",
                self.valid_tail_len, self.train_len
            )));
        }
        if let HorizonMode::MultiHorizon(h) = self.horizon_mode {
            if h == 0 || h > self.valid_tail_len || h > self.test_len {
                return Err(Error::InvalidArgument(format!(
                    "horizon {h} must be in 1..=min(validation tail, test length)"
                )));
            }
        }
        let needed = self.train_len + self.test_len;
        if series_len < needed {
            return Err(Error::InsufficientLength {
                needed,
                got: series_len,
            });
        }
        Ok(())
    }

    /// Last time index usable as a target while cross-validating.
    pub fn inner_train_end(&self) -> usize {
        self.train_len.saturating_sub(self.valid_tail_len)
    }
}

/// Builds a feature matrix for a series, a wavelet number and a horizon.
pub trait FeatureBuilder: Sync {
    fn build(&self, series: &[f64], number: Option<u32>, horizon: usize) -> Result<FeatureMatrix>;

    /// Whether the matrix depends on the wavelet number.
    fn uses_wavelet(&self) -> bool;

    fn selector(&self) -> Option<SelectorSpec> {
        None
    }
}

/// One of the three feature-set constructions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureSetSpec {
    pub kind: FeatureSetKind,
    /// Lag count for the lags-only set.
    pub max_lag: usize,
    pub levels: usize,
    /// Lags per coefficient sequence for the wavelet sets.
    pub lags_per_vector: usize,
    pub selector: Option<SelectorSpec>,
    pub budget: usize,
}

impl FeatureSetSpec {
    pub fn lags(max_lag: usize) -> Self {
        FeatureSetSpec {
            kind: FeatureSetKind::Lags,
            max_lag,
            levels: 0,
            lags_per_vector: 0,
            selector: None,
            budget: DEFAULT_BUFFER_BUDGET,
        }
    }

    pub fn wavelet(
        kind: FeatureSetKind,
        levels: usize,
        lags_per_vector: usize,
        selector: Option<SelectorSpec>,
    ) -> Self {
        FeatureSetSpec {
            kind,
            max_lag: 0,
            levels,
            lags_per_vector,
            selector,
            budget: DEFAULT_BUFFER_BUDGET,
        }
    }

    /// Desk-scale defaults: 120 lags; NDWT with 6 levels and 16 lags per
    /// sequence; NWPT with 6 levels and one lag per packet. Wavelet sets
    /// are cut to 120 columns by ridge selection with `alpha = 1`.
    pub fn desk_default(kind: FeatureSetKind) -> Self {
        let select = Some(SelectorSpec::RidgeTopk { k: 120, alpha: 1.0 });
        match kind {
            FeatureSetKind::Lags => FeatureSetSpec::lags(120),
            FeatureSetKind::Ndwt => FeatureSetSpec::wavelet(kind, 6, 16, select),
            FeatureSetKind::Nwpt => FeatureSetSpec::wavelet(kind, 6, 1, select),
        }
    }

    /// Column count before selection.
    pub fn column_count(&self) -> usize {
        match self.kind {
            FeatureSetKind::Lags => self.max_lag,
            FeatureSetKind::Ndwt => (self.levels + 2) * self.lags_per_vector,
            FeatureSetKind::Nwpt => ((1usize << (self.levels + 1)) - 1) * self.lags_per_vector,
        }
    }

    /// Earliest feature time (lag window fully defined).
    pub fn first_row_time(&self) -> usize {
        match self.kind {
            FeatureSetKind::Lags => self.max_lag,
            _ => self.lags_per_vector,
        }
    }

    pub fn transform_config(&self, number: u32) -> Result<TransformConfig> {
        let mode = match self.kind {
            FeatureSetKind::Ndwt => Mode::Ndwt,
            FeatureSetKind::Nwpt => Mode::Nwpt,
            FeatureSetKind::Lags => {
                return Err(Error::InvalidArgument(
                    "the lags feature set has no transform".into(),
                ))
            }
        };
        TransformConfig::with_budget(daubechies_filter(number)?, self.levels, mode, self.budget)
    }

    /// Checks everything that does not need the data.
    pub fn validate(&self, candidates: &[u32]) -> Result<()> {
        match self.kind {
            FeatureSetKind::Lags if self.max_lag == 0 => {
                return Err(Error::InvalidArgument("lags feature set needs max_lag >= 1".into()))
            }
            FeatureSetKind::Ndwt | FeatureSetKind::Nwpt => {
                if self.lags_per_vector == 0 {
                    return Err(Error::InvalidArgument(
                        "wavelet feature sets need at least one lag per vector".into(),
                    ));
                }
                for &n in candidates {
                    self.transform_config(n)?;
                }
            }
            _ => {}
        }
        if let Some(sel) = self.selector {
            let k = sel.k();
            if k == 0 || k > self.column_count() {
                return Err(Error::InvalidArgument(format!(
                    "{} selector keeps {k} of {} columns",
                    self.kind,
                    self.column_count()
                )));
            }
            if let SelectorSpec::RidgeTopk { alpha, .. } = sel {
                if !(alpha > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "selection alpha must be > 0, got {alpha}"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl FeatureBuilder for FeatureSetSpec {
    fn build(&self, series: &[f64], number: Option<u32>, horizon: usize) -> Result<FeatureMatrix> {
        match self.kind {
            FeatureSetKind::Lags => lag_matrix(series, self.max_lag, horizon),
            _ => {
                let number = number.ok_or_else(|| {
                    Error::InvalidArgument("wavelet feature sets need a wavelet number".into())
                })?;
                coefficient_features(series, &self.transform_config(number)?, self.lags_per_vector, horizon)
            }
        }
    }

    fn uses_wavelet(&self) -> bool {
        self.kind != FeatureSetKind::Lags
    }

    fn selector(&self) -> Option<SelectorSpec> {
        self.selector
    }
}

/// Everything fitted for one horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FittedHorizon {
    pub horizon: usize,
    pub normalizer: Normalizer,
    pub target: TargetScaler,
    pub kept_features: Vec<String>,
    /// Full ridge ranking when the ridge top-k selector is in use.
    pub ranking: Option<Vec<RankedFeature>>,
    pub pca: Option<PcaModel>,
    pub model: RidgeModel,
}

/// Outcome of fitting on targets up to `fit_end` and forecasting the
/// following window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitOutcome {
    pub alpha: f64,
    pub smape: f64,
    /// One-based target times of the forecasts.
    pub target_times: Vec<usize>,
    pub predictions: Vec<f64>,
    pub actuals: Vec<f64>,
    pub fitted: Vec<FittedHorizon>,
}

// Standardised design for one horizon, plus the rows to forecast.
struct Prepared {
    problem: RidgeProblem,
    eval_x: nalgebra::DMatrix<f64>,
    target: TargetScaler,
    normalizer: Normalizer,
    kept: Vec<String>,
    ranking: Option<Vec<RankedFeature>>,
    pca: Option<PcaModel>,
}

fn prepare(
    fm: &FeatureMatrix,
    selector: Option<SelectorSpec>,
    fit_rows: usize,
    eval_rows: std::ops::Range<usize>,
) -> Result<Prepared> {
    if fit_rows < 2 {
        return Err(Error::InsufficientLength {
            needed: 2,
            got: fit_rows,
        });
    }
    let (z, normalizer) = zscore(fm, fit_rows);
    let target = TargetScaler::fit(&fm.targets()[..fit_rows]);
    let z_targets: Vec<f64> = fm.targets()[..fit_rows].iter().map(|&y| target.forward(y)).collect();
    let (design, ranking, pca) = match selector {
        None => (z, None, None),
        Some(SelectorSpec::RidgeTopk { k, alpha }) => {
            let (m, selection) = ridge_topk_select(&z, &z_targets, fit_rows, k, alpha)?;
            (m, Some(selection.ranking), None)
        }
        Some(SelectorSpec::PcaTopk { k }) => {
            let (scores, model) = pca_topk(&z, fit_rows, k)?;
            (scores, None, Some(model))
        }
    };
    let train_x = design.data().rows(0, fit_rows).into_owned();
    let eval_x = design
        .data()
        .rows(eval_rows.start, eval_rows.len())
        .into_owned();
    Ok(Prepared {
        problem: RidgeProblem::new(&train_x, &z_targets)?,
        eval_x,
        target,
        normalizer,
        kept: design.names().to_vec(),
        ranking,
        pca,
    })
}

/// Fits ridge on every row whose target time is `<= fit_end` and forecasts
/// the next window: target times `fit_end+1..=eval_end` one step ahead, or
/// horizons `1..=H` from origin `fit_end`. With several `alphas` the one
/// with the lowest SMAPE wins (first in grid order on ties).
pub fn fit_and_forecast(
    builder: &dyn FeatureBuilder,
    series: &[f64],
    number: Option<u32>,
    alphas: &[f64],
    fit_end: usize,
    eval_end: usize,
    horizon_mode: HorizonMode,
) -> Result<FitOutcome> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("empty alpha grid".into()));
    }
    if eval_end > series.len() || fit_end >= eval_end {
        return Err(Error::InvalidArgument(format!(
            "invalid evaluation window {fit_end}..{eval_end} for length {}",
            series.len()
        )));
    }
    let view = &series[..eval_end];
    let selector = builder.selector();

    // Per horizon: prepared design and the eval-row target times.
    let mut stages: Vec<(usize, Prepared, Vec<usize>)> = Vec::new();
    match horizon_mode {
        HorizonMode::OneStep => {
            let fm = builder.build(view, number, 1)?;
            let fit_rows = fm.rows_with_target_through(fit_end);
            let end = fm.nrows();
            let times = fm.times()[fit_rows..end].iter().map(|t| t + 1).collect();
            stages.push((1, prepare(&fm, selector, fit_rows, fit_rows..end)?, times));
        }
        HorizonMode::MultiHorizon(max_h) => {
            for h in 1..=max_h {
                let fm = builder.build(view, number, h)?;
                let fit_rows = fm.rows_with_target_through(fit_end);
                let origin = fm.row_at_time(fit_end).ok_or(Error::InsufficientLength {
                    needed: fit_end + h,
                    got: view.len(),
                })?;
                stages.push((h, prepare(&fm, selector, fit_rows, origin..origin + 1)?, vec![fit_end + h]));
            }
        }
    }
    let target_times: Vec<usize> = stages.iter().flat_map(|(_, _, t)| t.iter().copied()).collect();
    if target_times.is_empty() {
        return Err(Error::InvalidArgument("nothing to forecast".into()));
    }
    let actuals: Vec<f64> = target_times.iter().map(|&t| series[t - 1]).collect();

    let mut best: Option<(f64, f64, Vec<f64>, Vec<RidgeModel>)> = None;
    for &alpha in alphas {
        let mut predictions = Vec::with_capacity(target_times.len());
        let mut models = Vec::with_capacity(stages.len());
        for (_, prep, _) in &stages {
            let model = prep.problem.solve(alpha)?;
            predictions.extend(model.predict(&prep.eval_x).into_iter().map(|z| prep.target.inverse(z)));
            models.push(model);
        }
        let score = smape(&predictions, &actuals)?;
        if best.as_ref().is_none_or(|b| score < b.1) {
            best = Some((alpha, score, predictions, models));
        }
    }
    let (alpha, score, predictions, models) = best.expect("non-empty grid");
    let fitted = stages
        .into_iter()
        .zip(models)
        .map(|((horizon, prep, _), model)| FittedHorizon {
            horizon,
            normalizer: prep.normalizer,
            target: prep.target,
            kept_features: prep.kept,
            ranking: prep.ranking,
            pca: prep.pca,
            model,
        })
        .collect();
    Ok(FitOutcome {
        alpha,
        smape: score,
        target_times,
        predictions,
        actuals,
        fitted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidateScore {
    pub number: u32,
    pub smape: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvResult {
    pub chosen: u32,
    pub chosen_alpha: f64,
    pub table: Vec<CandidateScore>,
}

pub(crate) fn check_candidates(candidates: &[u32]) -> Result<Vec<u32>> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    if let Some(&bad) = candidates.iter().find(|n| !(MIN_NUMBER..=MAX_NUMBER).contains(*n)) {
        return Err(Error::UnsupportedWavelet(bad));
    }
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted)
}

/// Picks the wavelet number whose model forecasts the validation tail of
/// the training segment best. Ties go to the smaller number.
pub fn cv_select_wavelet(
    series: &[f64],
    candidates: &[u32],
    builder: &dyn FeatureBuilder,
    alphas: &[f64],
    split: &SplitSpec,
) -> Result<CvResult> {
    let candidates = check_candidates(candidates)?;
    split.validate(series.len())?;
    let train = &series[..split.train_len];
    let table = candidates
        .par_iter()
        .map(|&number| {
            let outcome = fit_and_forecast(
                builder,
                train,
                Some(number),
                alphas,
                split.inner_train_end(),
                split.train_len,
                split.horizon_mode,
            )?;
            Ok(CandidateScore {
                number,
                smape: outcome.smape,
                alpha: outcome.alpha,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = table[0];
    for entry in &table[1..] {
        if entry.smape < best.smape {
            best = *entry;
        }
    }
    Ok(CvResult {
        chosen: best.number,
        chosen_alpha: best.alpha,
        table,
    })
}
