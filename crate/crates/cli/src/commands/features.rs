use std::path::PathBuf;

use serde::Serialize;
use wavecast::featureset::{
    pca_topk, ridge_topk_select, zscore, Normalizer, PcaModel, RankedFeature, SelectorSpec,
    TargetScaler,
};
use wavecast::forecast::{FeatureBuilder, FeatureSetKind, FeatureSetSpec};
use wavecast::numfmt::fmt17;
use wavecast::transform::DEFAULT_BUFFER_BUDGET;

use super::SelectorKind;
use crate::config::{pick, require, ConfigFile};
use crate::csvio::{read_series, write_file};
use crate::error::{CliError, CliResult};

const KEYS: &[&str] = &[
    "input",
    "feature-set",
    "wavelet",
    "levels",
    "max-lag",
    "lags-per-vector",
    "horizon",
    "train-len",
    "selector",
    "select-k",
    "select-alpha",
    "budget",
    "output",
];

/// Build a causal feature matrix from a t,value series.
///
/// Writes the standardised (and optionally selected) matrix as CSV with
/// columns t,target,<features>, plus a JSON sidecar next to it holding the
/// normalisation statistics, the selector ranking and any PCA loadings.
/// Statistics are fitted on rows whose target time is within --train-len.
#[derive(Debug, clap::Args)]
pub struct Args {
    /// Input CSV with header t,value.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// lags, ndwt or nwpt.
    #[arg(long)]
    feature_set: Option<FeatureSetKind>,
    /// Daubechies wavelet number for ndwt/nwpt (default 2).
    #[arg(long)]
    wavelet: Option<u32>,
    /// Decomposition depth for ndwt/nwpt (default 4).
    #[arg(long)]
    levels: Option<usize>,
    /// Lag count for the lags set (default 8).
    #[arg(long)]
    max_lag: Option<usize>,
    /// Lags per coefficient sequence for ndwt/nwpt (default 4).
    #[arg(long)]
    lags_per_vector: Option<usize>,
    /// Forecast horizon h of the target column (default 1).
    #[arg(long)]
    horizon: Option<usize>,
    /// Last time index used to fit statistics (default: whole series).
    #[arg(long)]
    train_len: Option<usize>,
    /// none, ridge-topk or pca-topk (default none).
    #[arg(long)]
    selector: Option<SelectorKind>,
    /// Columns kept by the selector (default 10).
    #[arg(long)]
    select_k: Option<usize>,
    /// Ridge penalty used for ranking (default 1).
    #[arg(long)]
    select_alpha: Option<f64>,
    /// Maximum number of buffered transform coefficients.
    #[arg(long)]
    budget: Option<usize>,
    /// Output CSV; the sidecar is written with a .json extension.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// key = value configuration file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    feature_set: FeatureSetKind,
    wavelet: Option<u32>,
    horizon: usize,
    fit_rows: usize,
    columns: &'a [String],
    normalizer: &'a Normalizer,
    target: TargetScaler,
    selector: Option<SelectorSpec>,
    ranking: Option<Vec<RankedFeature>>,
    pca: Option<PcaModel>,
}

pub fn run(args: Args) -> CliResult<()> {
    let file = ConfigFile::load(args.config.as_deref(), KEYS)?;
    let input = file.resolve_path(&require(args.input, &file, "input")?);
    let output = file.resolve_path(&require(args.output, &file, "output")?);
    let kind: FeatureSetKind = require(args.feature_set, &file, "feature-set")?;
    let horizon = pick(args.horizon, &file, "horizon")?.unwrap_or(1);
    let selector = pick(args.selector, &file, "selector")?.unwrap_or(SelectorKind::None).spec(
        pick(args.select_k, &file, "select-k")?.unwrap_or(10),
        pick(args.select_alpha, &file, "select-alpha")?.unwrap_or(1.0),
    );
    let mut spec = match kind {
        FeatureSetKind::Lags => FeatureSetSpec::lags(pick(args.max_lag, &file, "max-lag")?.unwrap_or(8)),
        _ => FeatureSetSpec::wavelet(
            kind,
            pick(args.levels, &file, "levels")?.unwrap_or(4),
            pick(args.lags_per_vector, &file, "lags-per-vector")?.unwrap_or(4),
            None,
        ),
    };
    spec.selector = selector;
    spec.budget = pick(args.budget, &file, "budget")?.unwrap_or(DEFAULT_BUFFER_BUDGET);
    let number = match kind {
        FeatureSetKind::Lags => None,
        _ => Some(pick(args.wavelet, &file, "wavelet")?.unwrap_or(2)),
    };
    if horizon == 0 {
        return Err(CliError::Usage("--horizon must be at least 1".into()));
    }
    spec.validate(&number.into_iter().collect::<Vec<_>>()).map_err(CliError::config)?;
    let train_len = pick(args.train_len, &file, "train-len")?;

    let series = read_series(&input)?;
    let fm = spec.build(&series.values, number, horizon).map_err(CliError::run)?;
    let fit_rows = match train_len {
        Some(last) => fm.rows_with_target_through(last),
        None => fm.nrows(),
    };
    if fit_rows < 2 {
        return Err(CliError::Data(format!(
            "only {fit_rows} rows fall within the fitting window; need at least 2"
        )));
    }
    let (z, normalizer) = zscore(&fm, fit_rows);
    let target = TargetScaler::fit(&fm.targets()[..fit_rows]);
    let z_targets: Vec<f64> = fm.targets()[..fit_rows].iter().map(|&y| target.forward(y)).collect();
    let (design, ranking, pca) = match selector {
        None => (z, None, None),
        Some(SelectorSpec::RidgeTopk { k, alpha }) => {
            let (m, sel) = ridge_topk_select(&z, &z_targets, fit_rows, k, alpha).map_err(CliError::run)?;
            (m, Some(sel.ranking), None)
        }
        Some(SelectorSpec::PcaTopk { k }) => {
            let (m, model) = pca_topk(&z, fit_rows, k).map_err(CliError::run)?;
            (m, None, Some(model))
        }
    };

    let mut csv = String::from("t,target");
    for name in design.names() {
        csv.push(',');
        csv.push_str(name);
    }
    csv.push('\n');
    for (r, &t) in design.times().iter().enumerate() {
        csv.push_str(&format!("{},{}", series.times[t - 1], fmt17(design.targets()[r])));
        for v in design.data().row(r).iter() {
            csv.push(',');
            csv.push_str(&fmt17(*v));
        }
        csv.push('\n');
    }
    write_file(&output, &csv)?;

    let sidecar = Sidecar {
        feature_set: kind,
        wavelet: number,
        horizon,
        fit_rows,
        columns: design.names(),
        normalizer: &normalizer,
        target,
        selector,
        ranking,
        pca,
    };
    let json = serde_json::to_string_pretty(&sidecar)
        .map_err(|e| CliError::Data(format!("serialising sidecar: {e}")))?;
    write_file(&output.with_extension("json"), &(json + "\n"))
}
