use std::io::Write;
use std::path::PathBuf;

use wavecast::signals::{generate, SignalKind, SignalSpec};

use crate::config::{pick, ConfigFile};
use crate::csvio::{open_output, series_csv};
use crate::error::{CliError, CliResult};

const KEYS: &[&str] = &["kind", "length", "noise-sd", "seed", "output"];

/// Generate a simulated test signal (bumps, doppler, heavisine) as t,value CSV.
#[derive(Debug, clap::Args)]
pub struct Args {
    /// Signal kind: bumps, doppler or heavisine.
    #[arg(long)]
    kind: Option<SignalKind>,
    /// Number of samples (at least 2).
    #[arg(long)]
    length: Option<usize>,
    /// Standard deviation of the additive Gaussian noise.
    #[arg(long)]
    noise_sd: Option<f64>,
    /// Noise seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// key = value configuration file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: Args) -> CliResult<()> {
    let file = ConfigFile::load(args.config.as_deref(), KEYS)?;
    let kind = pick(args.kind, &file, "kind")?
        .ok_or_else(|| CliError::Usage("missing required setting --kind (bumps, doppler, heavisine)".into()))?;
    let spec = SignalSpec {
        kind,
        length: pick(args.length, &file, "length")?.unwrap_or(1024),
        noise_sd: pick(args.noise_sd, &file, "noise-sd")?.unwrap_or(0.0),
        seed: pick(args.seed, &file, "seed")?.unwrap_or(0),
    };
    let output = pick(args.output, &file, "output")?.map(|p| file.resolve_path(&p));
    spec.validate().map_err(CliError::config)?;
    let values = generate(&spec).map_err(CliError::run)?;
    let mut out = open_output(output.as_deref())?;
    out.write_all(series_csv(&values).as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Data(format!("writing output: {e}")))
}
