use std::io::Write;
use std::path::PathBuf;

use wavecast::filterbank::{daubechies_filter, MAX_NUMBER, MIN_NUMBER};
use wavecast::numfmt::fmt17;

use crate::csvio::open_output;
use crate::error::{CliError, CliResult};

/// Print Daubechies extremal-phase filter taps as CSV.
///
/// With --wavelet the columns are n,h,g; otherwise every supported number
/// is listed with a leading `number` column.
#[derive(Debug, clap::Args)]
pub struct Args {
    /// Wavelet number (1 = Haar).
    #[arg(long)]
    wavelet: Option<u32>,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

pub fn run(args: Args) -> CliResult<()> {
    let mut text = String::new();
    match args.wavelet {
        Some(number) => {
            let f = daubechies_filter(number).map_err(CliError::config)?;
            text.push_str("n,h,g\n");
            for (n, (h, g)) in f.low_pass().iter().zip(f.high_pass()).enumerate() {
                text.push_str(&format!("{n},{},{}\n", fmt17(*h), fmt17(*g)));
            }
        }
        None => {
            text.push_str("number,n,h,g\n");
            for number in MIN_NUMBER..=MAX_NUMBER {
                let f = daubechies_filter(number).map_err(CliError::run)?;
                for (n, (h, g)) in f.low_pass().iter().zip(f.high_pass()).enumerate() {
                    text.push_str(&format!("{number},{n},{},{}\n", fmt17(*h), fmt17(*g)));
                }
            }
        }
    }
    let mut out = open_output(args.output.as_deref())?;
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Data(format!("writing output: {e}")))
}
