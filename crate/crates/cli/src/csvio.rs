//! Series CSV ingestion and shared output helpers. Input files carry a
//! mandatory `t,value` header; `t` is an increasing integer label.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use wavecast::numfmt::fmt17;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub times: Vec<i64>,
    pub values: Vec<f64>,
}

pub fn read_series(path: &Path) -> CliResult<Series> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_series(file).map_err(|msg| CliError::Data(format!("{}: {msg}", path.display())))
}

pub fn parse_series(input: impl Read) -> Result<Series, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader.headers().map_err(|e| e.to_string())?.clone();
    if header.is_empty() {
        return Err("empty file (expected header 't,value')".into());
    }
    if header.len() != 2 || &header[0] != "t" || &header[1] != "value" {
        return Err(format!(
            "line 1: expected header 't,value', found '{}'",
            header.iter().collect::<Vec<_>>().join(",")
        ));
    }
    let mut series = Series {
        times: Vec::new(),
        values: Vec::new(),
    };
    for record in reader.records() {
        let record = record.map_err(|e| match e.position() {
            Some(pos) => format!("line {}: {e}", pos.line()),
            None => e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let t: i64 = record[0]
            .parse()
            .map_err(|_| format!("line {line}: t '{}' is not an integer", &record[0]))?;
        let value: f64 = record[1]
            .parse()
            .map_err(|_| format!("line {line}: value '{}' is not a number", &record[1]))?;
        if !value.is_finite() {
            return Err(format!("line {line}: non-finite value '{}'", &record[1]));
        }
        if let Some(&prev) = series.times.last() {
            if t <= prev {
                return Err(format!("line {line}: t={t} does not follow t={prev}"));
            }
        }
        series.times.push(t);
        series.values.push(value);
    }
    if series.values.is_empty() {
        return Err("no observations after the header".into());
    }
    Ok(series)
}

/// `t,value` text with one-based times.
pub fn series_csv(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 28 + 8);
    out.push_str("t,value\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, fmt17(*v)));
    }
    out
}

/// A file at `path`, or stdout when no path is given.
pub fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) => {
            create_parent(p)?;
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

pub fn create_parent(path: &Path) -> CliResult<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
        }
        _ => Ok(()),
    }
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    create_parent(path)?;
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
