use std::io::Write;
use std::path::PathBuf;

use wavecast::numfmt::fmt17;
use wavecast::transform::DEFAULT_BUFFER_BUDGET;
use wavecast::{daubechies_filter, Mode, NodeId, TransformConfig, TransformState};

use crate::config::{pick, require, ConfigFile};
use crate::csvio::{open_output, read_series};
use crate::error::{CliError, CliResult};

const KEYS: &[&str] = &["input", "wavelet", "levels", "mode", "budget", "output"];

/// Stream a t,value series through the causal NDWT or NWPT.
///
/// Output is long-format CSV `t,level,packet,kind,value` with one row per
/// time and coefficient sequence. NDWT emits a detail and a smooth row per
/// level (packet left empty); NWPT emits every packet of levels 1..=L.
#[derive(Debug, clap::Args)]
pub struct Args {
    /// Input CSV with header t,value.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Daubechies wavelet number, 1..=10.
    #[arg(long)]
    wavelet: Option<u32>,
    /// Decomposition depth L.
    #[arg(long)]
    levels: Option<usize>,
    /// ndwt or nwpt (default ndwt).
    #[arg(long)]
    mode: Option<Mode>,
    /// Maximum number of buffered coefficients.
    #[arg(long)]
    budget: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// key = value configuration file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn node_columns(node: NodeId) -> (usize, String, &'static str) {
    match node {
        NodeId::Detail { level } => (level, String::new(), "detail"),
        NodeId::Smooth { level } => (level, String::new(), "smooth"),
        NodeId::Packet { level, index } => (level, index.to_string(), "packet"),
    }
}

pub fn run(args: Args) -> CliResult<()> {
    let file = ConfigFile::load(args.config.as_deref(), KEYS)?;
    let input = file.resolve_path(&require(args.input, &file, "input")?);
    let number: u32 = require(args.wavelet, &file, "wavelet")?;
    let levels: usize = require(args.levels, &file, "levels")?;
    let mode = pick(args.mode, &file, "mode")?.unwrap_or(Mode::Ndwt);
    let budget = pick(args.budget, &file, "budget")?.unwrap_or(DEFAULT_BUFFER_BUDGET);
    let output = pick(args.output, &file, "output")?.map(|p| file.resolve_path(&p));

    // Refuse oversized configurations before touching the data.
    let filter = daubechies_filter(number).map_err(CliError::config)?;
    let config = TransformConfig::with_budget(filter, levels, mode, budget).map_err(CliError::config)?;
    let series = read_series(&input)?;

    let labels: Vec<(usize, String, &str)> = config.nodes().into_iter().map(node_columns).collect();
    let mut state = TransformState::new(config);
    let mut out = open_output(output.as_deref())?;
    let write_err = |e: std::io::Error| CliError::Data(format!("writing output: {e}"));
    out.write_all(b"t,level,packet,kind,value\n").map_err(write_err)?;
    for (t, y) in series.times.iter().zip(&series.values) {
        let frame = state.push(*y).map_err(CliError::run)?;
        for ((level, packet, kind), v) in labels.iter().zip(frame.values()) {
            writeln!(out, "{t},{level},{packet},{kind},{}", fmt17(*v)).map_err(write_err)?;
        }
    }
    out.flush().map_err(write_err)
}
