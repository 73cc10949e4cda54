//! Linear forecasting baselines and experiment orchestration.

mod experiment;
mod persistence;
mod pipeline;
mod report;
mod ridge;

pub use experiment::{run_experiment, CellResult, ExperimentSpec, ModelKind, NamedSeries};
pub use persistence::{persistence_forecast, rolling_persistence};
pub use pipeline::{
    cv_select_wavelet, fit_and_forecast, CandidateScore, CvResult, FeatureBuilder, FeatureSetKind,
    FeatureSetSpec, FitOutcome, FittedHorizon, HorizonMode, SplitSpec,
};
pub use report::{modal, ForecastReport, ReportRow, TABLE_HEADER};
pub use ridge::{ridge_fit, RidgeModel, RidgeProblem, ALPHA_GRID};
