use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{HarnessError, ResultRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

pub const REPORT_COLUMNS: [&str; 13] = [
    "technique",
    "parameter",
    "eta",
    "clusters",
    "dunn",
    "davies_bouldin",
    "jaccard",
    "c_index",
    "rand",
    "fowlkes_mallows",
    "silhouette",
    "sse",
    "exec_time_ms",
];

const MARKDOWN_HEADER: [&str; 13] = [
    "Technique",
    "Parameter",
    "Eta",
    "No. of Clusters",
    "Dunn's",
    "DB",
    "Jaccard",
    "C",
    "Rand",
    "Fowlkes-Mallows",
    "Silhouette",
    "SSE",
    "Execution Time (ms)",
];

/// The quantities plotted against the cluster count, one series file each.
pub const SERIES: [&str; 9] = [
    "dunn",
    "davies_bouldin",
    "jaccard",
    "c_index",
    "rand",
    "fowlkes_mallows",
    "silhouette",
    "sse",
    "exec_time_ms",
];

fn series_value(row: &ResultRow, name: &str) -> Option<f64> {
    match name {
        "dunn" => row.dunn,
        "davies_bouldin" => row.davies_bouldin,
        "jaccard" => row.jaccard,
        "c_index" => row.c_index,
        "rand" => row.rand,
        "fowlkes_mallows" => row.fowlkes_mallows,
        "silhouette" => row.silhouette,
        "sse" => row.sse,
        "exec_time_ms" => Some(row.exec_time_ms),
        _ => None,
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

fn csv_fields(row: &ResultRow) -> [String; 13] {
    [
        row.technique.clone(),
        row.parameter.to_string(),
        opt(row.eta),
        row.clusters.to_string(),
        opt(row.dunn),
        opt(row.davies_bouldin),
        opt(row.jaccard),
        opt(row.c_index),
        opt(row.rand),
        opt(row.fowlkes_mallows),
        opt(row.silhouette),
        opt(row.sse),
        row.exec_time_ms.to_string(),
    ]
}

/// Writes the results table. CSV output uses shortest round-trip floats and
/// empty fields for absent values; markdown rounds to four decimals and
/// shows absent values as `-`.
pub fn emit_report<W: Write>(mut out: W, rows: &[ResultRow], format: ReportFormat) -> Result<(), HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::EmptyRows);
    }
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(REPORT_COLUMNS)?;
            for row in rows {
                w.write_record(csv_fields(row))?;
            }
            w.flush()?;
        }
        ReportFormat::Markdown => {
            let mut text = format!("| {} |\n", MARKDOWN_HEADER.join(" | "));
            text.push_str(&format!("|{}\n", "---|".repeat(MARKDOWN_HEADER.len())));
            let cell = |v: Option<f64>| v.map_or("-".to_owned(), |v| format!("{v:.4}"));
            for r in rows {
                let _ = writeln!(
                    text,
                    "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {:.3} |",
                    r.technique,
                    r.parameter,
                    r.eta.map_or("-".to_owned(), |e| e.to_string()),
                    r.clusters,
                    cell(r.dunn),
                    cell(r.davies_bouldin),
                    cell(r.jaccard),
                    cell(r.c_index),
                    cell(r.rand),
                    cell(r.fowlkes_mallows),
                    cell(r.silhouette),
                    cell(r.sse),
                    r.exec_time_ms
                );
            }
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

/// Reads back a CSV written by [`emit_report`].
pub fn parse_report<R: Read>(input: R) -> Result<Vec<ResultRow>, HarnessError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != REPORT_COLUMNS {
        return Err(HarnessError::BadReport {
            record: 0,
            detail: format!("unexpected header {header:?}"),
        });
    }
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let bad = |field: &str| HarnessError::BadReport {
            record: i + 1,
            detail: format!("cannot parse {field}"),
        };
        let num = |j: usize| -> Result<f64, HarnessError> { record[j].parse().map_err(|_| bad(REPORT_COLUMNS[j])) };
        let maybe = |j: usize| -> Result<Option<f64>, HarnessError> {
            if record[j].is_empty() {
                Ok(None)
            } else {
                num(j).map(Some)
            }
        };
        rows.push(ResultRow {
            technique: record[0].to_owned(),
            parameter: num(1)?,
            eta: if record[2].is_empty() {
                None
            } else {
                Some(record[2].parse().map_err(|_| bad("eta"))?)
            },
            clusters: record[3].parse().map_err(|_| bad("clusters"))?,
            dunn: maybe(4)?,
            davies_bouldin: maybe(5)?,
            jaccard: maybe(6)?,
            c_index: maybe(7)?,
            rand: maybe(8)?,
            fowlkes_mallows: maybe(9)?,
            silhouette: maybe(10)?,
            sse: maybe(11)?,
            exec_time_ms: num(12)?,
        });
    }
    Ok(rows)
}

/// One long-format table per quantity in [`SERIES`]: columns
/// `technique,parameter,eta,clusters,value`, rows in report order, absent
/// values skipped.
pub fn series_tables(rows: &[ResultRow]) -> Result<Vec<(&'static str, String)>, HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::EmptyRows);
    }
    Ok(SERIES
        .iter()
        .map(|&name| {
            let mut text = String::from("technique,parameter,eta,clusters,value\n");
            for r in rows {
                if let Some(v) = series_value(r, name) {
                    let _ = writeln!(
                        text,
                        "{},{},{},{},{}",
                        r.technique,
                        r.parameter,
                        opt(r.eta),
                        r.clusters,
                        v
                    );
                }
            }
            (name, text)
        })
        .collect())
}

/// Writes `series_<name>.csv` for every quantity into `dir`.
pub fn write_series(dir: &Path, rows: &[ResultRow]) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir)?;
    series_tables(rows)?
        .into_iter()
        .map(|(name, text)| {
            let path = dir.join(format!("series_{name}.csv"));
            fs::write(&path, text)?;
            Ok(path)
        })
        .collect()
}
