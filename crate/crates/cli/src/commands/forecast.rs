//! Forecast experiments. Each run is written to `<out-dir>/run-<hash>`,
//! where the hash covers the resolved configuration and the input data.
//! The directory holds everything needed to re-derive the report: the
//! configuration (inputs point at copies under `series/`), versions,
//! per-cell predictions and fitted models, and the report itself.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use wavecast::forecast::{
    run_experiment, CandidateScore, CellResult, ExperimentSpec, FeatureSetKind, FeatureSetSpec,
    FittedHorizon, HorizonMode, ModelKind, NamedSeries, SplitSpec, ALPHA_GRID,
};
use wavecast::numfmt::fmt17;
use wavecast::signals::{generate, SignalKind, SignalSpec};
use wavecast::transform::DEFAULT_BUFFER_BUDGET;

use super::SelectorKind;
use crate::config::{pick, Candidates, ConfigFile, List};
use crate::csvio::{read_series, series_csv, write_file};
use crate::error::{CliError, CliResult};

const KEYS: &[&str] = &[
    "input",
    "simulate",
    "n-series",
    "length",
    "noise-sd",
    "seed",
    "feature-sets",
    "models",
    "candidates",
    "max-lag",
    "levels",
    "ndwt-lags",
    "nwpt-lags",
    "selector",
    "select-k",
    "select-alpha",
    "budget",
    "train-len",
    "valid-tail",
    "test-len",
    "horizon",
    "alphas",
    "jobs",
    "out-dir",
];

/// Run a forecasting experiment and write a report directory.
///
/// Series come from --input files (named by file stem) or are simulated
/// with --simulate. Every (series, model, feature set) cell is fitted on
/// the training segment, with the wavelet number chosen on its validation
/// tail, and scored by SMAPE on the test segment.
#[derive(Debug, clap::Args)]
pub struct Args {
    /// Input CSV files with header t,value (comma-separated or repeated).
    #[arg(long, short, value_delimiter = ',')]
    input: Vec<PathBuf>,
    /// Simulate series of these kinds instead of reading files.
    #[arg(long)]
    simulate: Option<List<SignalKind>>,
    /// Simulated series per kind (default 1).
    #[arg(long)]
    n_series: Option<usize>,
    /// Simulated series length (default 2000).
    #[arg(long)]
    length: Option<usize>,
    /// Simulation noise standard deviation (default 0.5).
    #[arg(long)]
    noise_sd: Option<f64>,
    /// First simulation seed; later series use seed+1, seed+2, ... (default 1).
    #[arg(long)]
    seed: Option<u64>,
    /// Feature sets: lags, ndwt, nwpt (default all three).
    #[arg(long)]
    feature_sets: Option<List<FeatureSetKind>>,
    /// Models: ridge, persistence (default both).
    #[arg(long)]
    models: Option<List<ModelKind>>,
    /// Candidate wavelet numbers, e.g. 1-10 or 1,2,4 (default 1-10).
    #[arg(long)]
    candidates: Option<Candidates>,
    /// Lag count of the lags feature set (default 120).
    #[arg(long)]
    max_lag: Option<usize>,
    /// Decomposition depth of the wavelet feature sets (default 6).
    #[arg(long)]
    levels: Option<usize>,
    /// Lags per NDWT coefficient sequence (default 16).
    #[arg(long)]
    ndwt_lags: Option<usize>,
    /// Lags per NWPT packet sequence (default 1).
    #[arg(long)]
    nwpt_lags: Option<usize>,
    /// Selector for the wavelet feature sets: none, ridge-topk, pca-topk (default ridge-topk).
    #[arg(long)]
    selector: Option<SelectorKind>,
    /// Columns kept by the selector (default 120).
    #[arg(long)]
    select_k: Option<usize>,
    /// Ridge penalty used for ranking (default 1).
    #[arg(long)]
    select_alpha: Option<f64>,
    /// Maximum number of buffered transform coefficients.
    #[arg(long)]
    budget: Option<usize>,
    /// Training length, validation tail included (default: length - test-len).
    #[arg(long)]
    train_len: Option<usize>,
    /// Validation tail used for wavelet and penalty choice (default 200).
    #[arg(long)]
    valid_tail: Option<usize>,
    /// Test length (default 200).
    #[arg(long)]
    test_len: Option<usize>,
    /// 1 for rolling one-step forecasts, H > 1 for direct 1..=H forecasts (default 1).
    #[arg(long)]
    horizon: Option<usize>,
    /// Ridge penalty grid (default powers of two from 1/32 to 32).
    #[arg(long)]
    alphas: Option<List<f64>>,
    /// Worker threads; never changes any output (default: available cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Root directory for run directories (default wavecast-runs).
    #[arg(long, env = "WAVECAST_OUT")]
    out_dir: Option<PathBuf>,
    /// key = value configuration file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Fully resolved settings; serialised verbatim into the run directory.
#[derive(Debug, Clone)]
struct RunConfig {
    feature_sets: Vec<FeatureSetKind>,
    models: Vec<ModelKind>,
    candidates: Vec<u32>,
    max_lag: usize,
    levels: usize,
    ndwt_lags: usize,
    nwpt_lags: usize,
    selector: SelectorKind,
    select_k: usize,
    select_alpha: f64,
    budget: usize,
    train_len: usize,
    valid_tail: usize,
    test_len: usize,
    horizon: usize,
    alphas: Vec<f64>,
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

impl RunConfig {
    fn feature_set_specs(&self) -> Vec<FeatureSetSpec> {
        let selector = self.selector.spec(self.select_k, self.select_alpha);
        self.feature_sets
            .iter()
            .map(|&kind| {
                let mut spec = match kind {
                    FeatureSetKind::Lags => FeatureSetSpec::lags(self.max_lag),
                    FeatureSetKind::Ndwt => FeatureSetSpec::wavelet(kind, self.levels, self.ndwt_lags, selector),
                    FeatureSetKind::Nwpt => FeatureSetSpec::wavelet(kind, self.levels, self.nwpt_lags, selector),
                };
                spec.budget = self.budget;
                spec
            })
            .collect()
    }

    fn split(&self) -> SplitSpec {
        SplitSpec {
            train_len: self.train_len,
            valid_tail_len: self.valid_tail,
            test_len: self.test_len,
            horizon_mode: match self.horizon {
                1 => HorizonMode::OneStep,
                h => HorizonMode::MultiHorizon(h),
            },
        }
    }

    /// Config-file text that reproduces this run from its directory.
    fn to_text(&self, series_names: &[String]) -> String {
        let mut s = String::from("# wavecast forecast run; paths are relative to this file\n");
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("input", join(series_names, |n| format!("series/{n}.csv")));
        kv("feature-sets", join(&self.feature_sets, |k| k.label().to_ascii_lowercase()));
        kv("models", join(&self.models, |m| m.label().to_ascii_lowercase()));
        kv("candidates", Candidates(self.candidates.clone()).to_string());
        kv("max-lag", self.max_lag.to_string());
        kv("levels", self.levels.to_string());
        kv("ndwt-lags", self.ndwt_lags.to_string());
        kv("nwpt-lags", self.nwpt_lags.to_string());
        kv("selector", self.selector.to_string());
        kv("select-k", self.select_k.to_string());
        kv("select-alpha", self.select_alpha.to_string());
        kv("budget", self.budget.to_string());
        kv("train-len", self.train_len.to_string());
        kv("valid-tail", self.valid_tail.to_string());
        kv("test-len", self.test_len.to_string());
        kv("horizon", self.horizon.to_string());
        kv("alphas", join(&self.alphas, f64::to_string));
        s
    }
}

fn series_name(path: &Path) -> CliResult<String> {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    let ok = !stem.is_empty()
        && stem.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(stem.to_string())
    } else {
        Err(CliError::Usage(format!(
            "cannot name a series after '{}': file stems may only use letters, digits, '-', '_' and '.'",
            path.display()
        )))
    }
}

fn load_series(args: &mut Args, file: &ConfigFile) -> CliResult<Vec<NamedSeries>> {
    let inputs: Vec<PathBuf> = if !args.input.is_empty() {
        std::mem::take(&mut args.input)
    } else {
        file.get::<List<PathBuf>>("input")?
            .map(|l| l.0.iter().map(|p| file.resolve_path(p)).collect())
            .unwrap_or_default()
    };
    let simulate = pick(args.simulate.take(), file, "simulate")?;
    let mut series = Vec::new();
    match (inputs.is_empty(), simulate) {
        (false, Some(_)) => {
            return Err(CliError::Usage("give either --input or --simulate, not both".into()))
        }
        (true, None) => return Err(CliError::Usage("no series: give --input or --simulate".into())),
        (false, None) => {
            for path in &inputs {
                let name = series_name(path)?;
                series.push(NamedSeries {
                    name,
                    values: read_series(path)?.values,
                });
            }
        }
        (true, Some(List(kinds))) => {
            let per_kind = pick(args.n_series, file, "n-series")?.unwrap_or(1);
            let length = pick(args.length, file, "length")?.unwrap_or(2000);
            let noise_sd = pick(args.noise_sd, file, "noise-sd")?.unwrap_or(0.5);
            let seed: u64 = pick(args.seed, file, "seed")?.unwrap_or(1);
            for kind in kinds {
                for i in 0..per_kind {
                    let spec = SignalSpec {
                        kind,
                        length,
                        noise_sd,
                        seed: seed + series.len() as u64,
                    };
                    spec.validate().map_err(CliError::config)?;
                    series.push(NamedSeries {
                        name: format!("{}-{i}", kind.as_str()),
                        values: generate(&spec).map_err(CliError::run)?,
                    });
                }
            }
        }
    }
    let mut names: Vec<&str> = series.iter().map(|s| s.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Usage(format!("two input series are named '{}'", w[0])));
    }
    Ok(series)
}

fn resolve(args: Args, file: &ConfigFile, series: &[NamedSeries]) -> CliResult<RunConfig> {
    let test_len = pick(args.test_len, file, "test-len")?.unwrap_or(200);
    let shortest = series.iter().map(|s| s.values.len()).min().unwrap_or(0);
    let train_len = match pick(args.train_len, file, "train-len")? {
        Some(n) => n,
        None => shortest.checked_sub(test_len).ok_or_else(|| {
            CliError::Usage(format!("series of length {shortest} cannot hold a test segment of {test_len}"))
        })?,
    };
    let horizon = pick(args.horizon, file, "horizon")?.unwrap_or(1);
    if horizon == 0 {
        return Err(CliError::Usage("--horizon must be at least 1".into()));
    }
    let all_sets = vec![FeatureSetKind::Lags, FeatureSetKind::Ndwt, FeatureSetKind::Nwpt];
    Ok(RunConfig {
        feature_sets: pick(args.feature_sets, file, "feature-sets")?.map_or(all_sets, |l| l.0),
        models: pick(args.models, file, "models")?
            .map_or(vec![ModelKind::Ridge, ModelKind::Persistence], |l| l.0),
        candidates: pick(args.candidates, file, "candidates")?.map_or((1..=10).collect(), |c| c.0),
        max_lag: pick(args.max_lag, file, "max-lag")?.unwrap_or(120),
        levels: pick(args.levels, file, "levels")?.unwrap_or(6),
        ndwt_lags: pick(args.ndwt_lags, file, "ndwt-lags")?.unwrap_or(16),
        nwpt_lags: pick(args.nwpt_lags, file, "nwpt-lags")?.unwrap_or(1),
        selector: pick(args.selector, file, "selector")?.unwrap_or(SelectorKind::RidgeTopk),
        select_k: pick(args.select_k, file, "select-k")?.unwrap_or(120),
        select_alpha: pick(args.select_alpha, file, "select-alpha")?.unwrap_or(1.0),
        budget: pick(args.budget, file, "budget")?.unwrap_or(DEFAULT_BUFFER_BUDGET),
        train_len,
        valid_tail: pick(args.valid_tail, file, "valid-tail")?.unwrap_or(200),
        test_len,
        horizon,
        alphas: pick(args.alphas, file, "alphas")?.map_or(ALPHA_GRID.to_vec(), |l| l.0),
    })
}

#[derive(Serialize)]
struct CellArtifact<'a> {
    series: &'a str,
    model: ModelKind,
    feature_set: FeatureSetKind,
    wavelet: Option<u32>,
    alpha: Option<f64>,
    smape_pct: f64,
    cv_table: &'a [CandidateScore],
    fitted: &'a [FittedHorizon],
}

fn predictions_csv(cell: &CellResult) -> String {
    let mut s = String::from("t,actual,prediction\n");
    for ((t, a), p) in cell.target_times.iter().zip(&cell.actuals).zip(&cell.predictions) {
        let _ = writeln!(s, "{t},{},{}", fmt17(*a), fmt17(*p));
    }
    s
}

fn run_hash(config_text: &str, series: &[(String, String)]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(config_text.as_bytes());
    for (name, csv) in series {
        hasher.update(name.as_bytes());
        hasher.update([0]);
        hasher.update(csv.as_bytes());
    }
    let digest = hasher.finalize();
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

pub fn run(mut args: Args) -> CliResult<()> {
    let file = ConfigFile::load(args.config.as_deref(), KEYS)?;
    let jobs = match pick(args.jobs, &file, "jobs")? {
        Some(0) => return Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, usize::from),
    };
    let out_dir = match args.out_dir.take() {
        Some(dir) => dir,
        None => file
            .get::<PathBuf>("out-dir")?
            .map_or_else(|| PathBuf::from("wavecast-runs"), |p| file.resolve_path(&p)),
    };
    let series = load_series(&mut args, &file)?;
    let config = resolve(args, &file, &series)?;
    let spec = ExperimentSpec {
        series,
        feature_sets: config.feature_set_specs(),
        models: config.models.clone(),
        candidates: config.candidates.clone(),
        split: config.split(),
        alphas: config.alphas.clone(),
    };
    spec.validate().map_err(CliError::config)?;

    let names: Vec<String> = spec.series.iter().map(|s| s.name.clone()).collect();
    let config_text = config.to_text(&names);
    let series_files: Vec<(String, String)> = spec
        .series
        .iter()
        .map(|s| (s.name.clone(), series_csv(&s.values)))
        .collect();
    let run_dir = out_dir.join(format!("run-{}", run_hash(&config_text, &series_files)));

    let report = run_experiment(&spec, jobs).map_err(CliError::run)?;

    write_file(&run_dir.join("config.txt"), &config_text)?;
    write_file(
        &run_dir.join("versions.txt"),
        &format!("wavecast-cli {}\nwavecast-core {}\n", env!("CARGO_PKG_VERSION"), wavecast::VERSION),
    )?;
    for (name, csv) in &series_files {
        write_file(&run_dir.join("series").join(format!("{name}.csv")), csv)?;
    }
    let table = report.to_table();
    write_file(&run_dir.join("report.csv"), &report.to_csv())?;
    write_file(&run_dir.join("report.txt"), &table)?;
    write_file(&run_dir.join("cells.csv"), &report.cells_csv())?;
    for cell in &report.cells {
        let dir = run_dir.join("cells").join(&cell.series).join(format!(
            "{}-{}",
            cell.model.label().to_ascii_lowercase(),
            cell.feature_set.label().to_ascii_lowercase()
        ));
        write_file(&dir.join("predictions.csv"), &predictions_csv(cell))?;
        let artifact = CellArtifact {
            series: &cell.series,
            model: cell.model,
            feature_set: cell.feature_set,
            wavelet: cell.wavelet,
            alpha: cell.alpha,
            smape_pct: cell.smape,
            cv_table: &cell.cv_table,
            fitted: &cell.fitted,
        };
        let json = serde_json::to_string_pretty(&artifact)
            .map_err(|e| CliError::Data(format!("serialising cell: {e}")))?;
        write_file(&dir.join("cell.json"), &(json + "\n"))?;
    }
    print!("{table}");
    println!("run directory: {}", run_dir.display());
    Ok(())
}
