use std::fmt::Write as _;

use serde::Serialize;

use super::experiment::{CellResult, ModelKind};
use super::pipeline::{FeatureSetKind, FeatureSetSpec};
use crate::error::Result;
use crate::metrics::ScoreSummary;
use crate::numfmt::fmt17;

pub const TABLE_HEADER: [&str; 4] = [
    "Model",
    "Feature Set",
    "Modal Wavelet Number",
    "Mean SMAPE % (SE)",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub model: ModelKind,
    pub feature_set: FeatureSetKind,
    pub modal_wavelet: Option<u32>,
    pub summary: ScoreSummary,
}

/// Per-configuration SMAPE summary across series, plus every cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastReport {
    pub rows: Vec<ReportRow>,
    pub cells: Vec<CellResult>,
}

/// Most frequent value; ties go to the smallest.
pub fn modal(values: impl IntoIterator<Item = u32>) -> Option<u32> {
    let mut v: Vec<u32> = values.into_iter().collect();
    v.sort_unstable();
    let mut best: Option<(u32, usize)> = None;
    for chunk in v.chunk_by(|a, b| a == b) {
        if best.is_none_or(|(_, c)| chunk.len() > c) {
            best = Some((chunk[0], chunk.len()));
        }
    }
    best.map(|(n, _)| n)
}

impl ForecastReport {
    pub(crate) fn assemble(
        models: &[ModelKind],
        feature_sets: &[FeatureSetSpec],
        cells: Vec<CellResult>,
    ) -> Result<Self> {
        let mut rows = Vec::new();
        for &model in models {
            for fs in feature_sets {
                let group: Vec<&CellResult> = cells
                    .iter()
                    .filter(|c| c.model == model && c.feature_set == fs.kind)
                    .collect();
                let scores: Vec<f64> = group.iter().map(|c| c.smape).collect();
                rows.push(ReportRow {
                    model,
                    feature_set: fs.kind,
                    modal_wavelet: modal(group.iter().filter_map(|c| c.wavelet)),
                    summary: ScoreSummary::from_scores(&scores)?,
                });
            }
        }
        Ok(ForecastReport { rows, cells })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,feature_set,modal_wavelet_number,mean_smape_pct,se_pct,n_series\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.model,
                r.feature_set,
                r.modal_wavelet.map_or("-".to_string(), |n| n.to_string()),
                fmt17(r.summary.mean_smape_pct),
                fmt17(r.summary.se_pct),
                r.summary.n
            );
        }
        out
    }

    /// Per-cell scores; the input for recomputing every summary row.
    pub fn cells_csv(&self) -> String {
        let mut out = String::from("series,model,feature_set,wavelet_number,alpha,smape_pct\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                c.series,
                c.model,
                c.feature_set,
                c.wavelet.map_or("-".to_string(), |n| n.to_string()),
                c.alpha.map_or("-".to_string(), fmt17),
                fmt17(c.smape)
            );
        }
        out
    }

    /// Aligned text table with a separator between models.
    pub fn to_table(&self) -> String {
        let body: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                let se = if r.summary.se_pct.is_nan() {
                    "n/a".to_string()
                } else {
                    format!("{:.2}", r.summary.se_pct)
                };
                [
                    r.model.to_string(),
                    r.feature_set.to_string(),
                    r.modal_wavelet.map_or("-".to_string(), |n| n.to_string()),
                    format!("{:.2} ({se})", r.summary.mean_smape_pct),
                ]
            })
            .collect();
        let mut widths = TABLE_HEADER.map(str::len);
        for row in &body {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let rule: String = widths
            .iter()
            .map(|w| "-".repeat(w + 2))
            .collect::<Vec<_>>()
            .join("+");
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!(" {c:<w$} "))
                .collect::<Vec<_>>()
                .join("|")
        };
        let mut out = String::new();
        let header: Vec<String> = TABLE_HEADER.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "{}", line(&header));
        let _ = writeln!(out, "{rule}");
        let mut previous: Option<ModelKind> = None;
        for (row, cells) in self.rows.iter().zip(&body) {
            if previous.is_some_and(|m| m != row.model) {
                let _ = writeln!(out, "{rule}");
            }
            previous = Some(row.model);
            let _ = writeln!(out, "{}", line(cells));
        }
        out
    }
}
