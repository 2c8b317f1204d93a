use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::report::ReportFormat;
use super::HarnessError;
use crate::cluster::{
    dbscan, hierarchical, kmeans, kmedoids, leader, ClusterError, Clustering, KMeansParams, KMedoidsParams, Linkage,
    MedoidUpdate,
};
use crate::dataset::Dataset;
use crate::validity::{full_report, ReferenceLabels};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    KMeans,
    KMedoids,
    Leader,
    Hierarchical,
    Dbscan,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::KMeans,
        Algorithm::KMedoids,
        Algorithm::Leader,
        Algorithm::Hierarchical,
        Algorithm::Dbscan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::KMeans => "kmeans",
            Algorithm::KMedoids => "kmedoids",
            Algorithm::Leader => "leader",
            Algorithm::Hierarchical => "hierarchical",
            Algorithm::Dbscan => "dbscan",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kmeans" | "k-means" => Ok(Algorithm::KMeans),
            "kmedoids" | "k-medoids" => Ok(Algorithm::KMedoids),
            "leader" => Ok(Algorithm::Leader),
            "hier" | "hierarchical" => Ok(Algorithm::Hierarchical),
            "dbscan" => Ok(Algorithm::Dbscan),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

/// An inclusive arithmetic grid `start, start + step, ..., end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatGrid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl FloatGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.step.is_nan() || self.step <= 0.0 || self.end < self.start {
            return Vec::new();
        }
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// Everything a sweep needs. Read from a `key = value` file; see
/// [`SweepConfig::parse`] for the keys.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub algorithms: Vec<Algorithm>,
    pub dataset: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub series_dir: Option<PathBuf>,
    pub format: ReportFormat,
    pub k_min: usize,
    pub k_max: usize,
    pub alpha: FloatGrid,
    pub eps: FloatGrid,
    pub eta_min: usize,
    pub eta_max: usize,
    pub seed: u64,
    pub repetitions: usize,
    pub jobs: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub linkage: Linkage,
    pub medoid_update: MedoidUpdate,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let half_steps = FloatGrid {
            start: 0.5,
            end: 3.5,
            step: 0.5,
        };
        SweepConfig {
            algorithms: Algorithm::ALL.to_vec(),
            dataset: None,
            labels: None,
            out: None,
            series_dir: None,
            format: ReportFormat::Csv,
            k_min: 2,
            k_max: 25,
            alpha: half_steps,
            eps: half_steps,
            eta_min: 2,
            eta_max: 10,
            seed: 0,
            repetitions: 5,
            jobs: 1,
            tol: 1e-9,
            max_iter: 100,
            linkage: Linkage::Single,
            medoid_update: MedoidUpdate::Unsquared,
        }
    }
}

impl SweepConfig {
    /// Parses `key = value` lines over the defaults. Blank lines and lines
    /// starting with `#` are skipped.
    ///
    /// | key | default |
    /// |-----|---------|
    /// | `algorithms` | `kmeans,kmedoids,leader,hierarchical,dbscan` |
    /// | `dataset`, `labels`, `out`, `series_dir` | unset |
    /// | `format` | `csv` (or `markdown`) |
    /// | `k_min`, `k_max` | `2`, `25` |
    /// | `alpha_min`, `alpha_max`, `alpha_step` | `0.5`, `3.5`, `0.5` |
    /// | `eps_min`, `eps_max`, `eps_step` | `0.5`, `3.5`, `0.5` |
    /// | `eta_min`, `eta_max` | `2`, `10` |
    /// | `seed` | `0` |
    /// | `repetitions` | `5` |
    /// | `jobs` | `1` |
    /// | `tol`, `max_iter` | `1e-9`, `100` |
    /// | `linkage` | `single` (or `complete`, `average`) |
    /// | `medoid_update` | `unsquared` (or `squared`) |
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut config = SweepConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |detail: String| HarnessError::InvalidConfig { line: n + 1, detail };
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            fn num<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
                value.parse().map_err(|_| format!("{key}: cannot parse {value:?}"))
            }
            let applied: Result<(), String> = (|| {
                match key {
                    "algorithms" => {
                        config.algorithms = value
                            .split(',')
                            .filter(|s| !s.trim().is_empty())
                            .map(str::parse)
                            .collect::<Result<_, _>>()?
                    }
                    "dataset" => config.dataset = Some(value.into()),
                    "labels" => config.labels = Some(value.into()),
                    "out" => config.out = Some(value.into()),
                    "series_dir" => config.series_dir = Some(value.into()),
                    "format" => config.format = value.parse()?,
                    "k_min" => config.k_min = num(key, value)?,
                    "k_max" => config.k_max = num(key, value)?,
                    "alpha_min" => config.alpha.start = num(key, value)?,
                    "alpha_max" => config.alpha.end = num(key, value)?,
                    "alpha_step" => config.alpha.step = num(key, value)?,
                    "eps_min" => config.eps.start = num(key, value)?,
                    "eps_max" => config.eps.end = num(key, value)?,
                    "eps_step" => config.eps.step = num(key, value)?,
                    "eta_min" => config.eta_min = num(key, value)?,
                    "eta_max" => config.eta_max = num(key, value)?,
                    "seed" => config.seed = num(key, value)?,
                    "repetitions" => config.repetitions = num(key, value)?,
                    "jobs" => config.jobs = num(key, value)?,
                    "tol" => config.tol = num(key, value)?,
                    "max_iter" => config.max_iter = num(key, value)?,
                    "linkage" => config.linkage = value.parse()?,
                    "medoid_update" => {
                        config.medoid_update = match value {
                            "unsquared" => MedoidUpdate::Unsquared,
                            "squared" => MedoidUpdate::Squared,
                            other => return Err(format!("unknown medoid_update {other:?}")),
                        }
                    }
                    other => return Err(format!("unknown key {other:?}")),
                }
                Ok(())
            })();
            applied.map_err(bad)?;
        }
        Ok(config)
    }

    /// Checks the grids are non-empty and, when `m` is known, that the k
    /// range lies within `2..=m`.
    pub fn validate(&self, m: Option<usize>) -> Result<(), HarnessError> {
        let bad = |detail: &str| {
            Err(HarnessError::InvalidConfig {
                line: 0,
                detail: detail.into(),
            })
        };
        if self.algorithms.is_empty() {
            return bad("no algorithms selected");
        }
        let uses = |a: Algorithm| self.algorithms.contains(&a);
        let uses_k = uses(Algorithm::KMeans) || uses(Algorithm::KMedoids) || uses(Algorithm::Hierarchical);
        if uses_k {
            if self.k_min < 2 || self.k_min > self.k_max {
                return bad("k range must satisfy 2 <= k_min <= k_max");
            }
            if m.is_some_and(|m| self.k_max > m) {
                return bad("k_max exceeds the number of points");
            }
        }
        if uses(Algorithm::Leader) && self.alpha.values().is_empty() {
            return bad("empty alpha grid");
        }
        if uses(Algorithm::Dbscan) && (self.eps.values().is_empty() || self.eta_min == 0 || self.eta_min > self.eta_max)
        {
            return bad("empty eps or eta grid");
        }
        if self.repetitions == 0 || self.jobs == 0 {
            return bad("repetitions and jobs must be positive");
        }
        Ok(())
    }

    /// Sweep cells in report order: algorithms as listed, each over its grid.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &algorithm in &self.algorithms {
            match algorithm {
                Algorithm::KMeans | Algorithm::KMedoids | Algorithm::Hierarchical => {
                    cells.extend((self.k_min..=self.k_max).map(|k| Cell {
                        algorithm,
                        parameter: k as f64,
                        eta: None,
                    }))
                }
                Algorithm::Leader => cells.extend(self.alpha.values().into_iter().map(|alpha| Cell {
                    algorithm,
                    parameter: alpha,
                    eta: None,
                })),
                Algorithm::Dbscan => {
                    for eps in self.eps.values() {
                        cells.extend((self.eta_min..=self.eta_max).map(|eta| Cell {
                            algorithm,
                            parameter: eps,
                            eta: Some(eta),
                        }))
                    }
                }
            }
        }
        cells
    }

    /// Runs one cell's clustering once.
    pub fn run_cell(&self, data: &Dataset, cell: &Cell) -> Result<Clustering, ClusterError> {
        let k = cell.parameter as usize;
        match cell.algorithm {
            Algorithm::KMeans => kmeans(
                data,
                &KMeansParams {
                    k,
                    seed: self.seed,
                    tol: self.tol,
                    max_iter: self.max_iter,
                },
            ),
            Algorithm::KMedoids => kmedoids(
                data,
                &KMedoidsParams {
                    k,
                    seed: self.seed,
                    max_iter: self.max_iter,
                    update: self.medoid_update,
                },
            ),
            Algorithm::Leader => leader(data, cell.parameter),
            Algorithm::Hierarchical => hierarchical(data, k, self.linkage),
            Algorithm::Dbscan => dbscan(data, cell.parameter, cell.eta.unwrap_or(1)),
        }
    }
}

/// One grid point. `parameter` is k, alpha or eps depending on the
/// algorithm; `eta` is set for DBSCAN only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub algorithm: Algorithm,
    pub parameter: f64,
    pub eta: Option<usize>,
}

/// One line of the results table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub technique: String,
    pub parameter: f64,
    pub eta: Option<usize>,
    pub clusters: usize,
    pub dunn: Option<f64>,
    pub davies_bouldin: Option<f64>,
    pub jaccard: Option<f64>,
    pub c_index: Option<f64>,
    pub rand: Option<f64>,
    pub fowlkes_mallows: Option<f64>,
    pub silhouette: Option<f64>,
    pub sse: Option<f64>,
    pub exec_time_ms: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn evaluate_cell(config: &SweepConfig, data: &Dataset, labels: Option<&ReferenceLabels>, cell: &Cell) -> ResultRow {
    let mut times = Vec::with_capacity(config.repetitions);
    let mut outcome = None;
    for _ in 0..config.repetitions {
        let start = Instant::now();
        let result = config.run_cell(data, cell);
        times.push(start.elapsed().as_secs_f64() * 1000.0);
        outcome = Some(result);
    }
    let mut row = ResultRow {
        technique: cell.algorithm.name().to_owned(),
        parameter: cell.parameter,
        eta: cell.eta,
        clusters: 0,
        dunn: None,
        davies_bouldin: None,
        jaccard: None,
        c_index: None,
        rand: None,
        fowlkes_mallows: None,
        silhouette: None,
        sse: None,
        exec_time_ms: median(times),
    };
    if let Some(Ok(clustering)) = outcome {
        let report = full_report(data, &clustering, labels);
        row.clusters = clustering.k();
        row.dunn = report.dunn.ok();
        row.davies_bouldin = report.davies_bouldin.ok();
        row.jaccard = report.jaccard.ok();
        row.c_index = report.c_index.ok();
        row.rand = report.rand.ok();
        row.fowlkes_mallows = report.fowlkes_mallows.ok();
        row.silhouette = report.silhouette.ok();
        row.sse = report.sse.ok();
    }
    row
}

/// One row per grid cell, in grid order. The time is the median over
/// `repetitions` runs of the clustering call alone. A cell whose
/// clustering or index fails keeps its row with the value left empty.
///
/// With `jobs > 1` cells run concurrently, which skews the timings.
pub fn run_sweep(
    config: &SweepConfig,
    data: &Dataset,
    labels: Option<&ReferenceLabels>,
) -> Result<Vec<ResultRow>, HarnessError> {
    config.validate(Some(data.len()))?;
    if labels.is_some_and(|l| l.len() != data.len()) {
        return Err(HarnessError::InvalidConfig {
            line: 0,
            detail: format!(
                "labels cover {} points, dataset has {}",
                labels.map_or(0, |l| l.len()),
                data.len()
            ),
        });
    }
    let cells = config.cells();
    if config.jobs == 1 {
        return Ok(cells.iter().map(|c| evaluate_cell(config, data, labels, c)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| HarnessError::InvalidConfig {
            line: 0,
            detail: e.to_string(),
        })?;
    Ok(pool.install(|| {
        cells
            .par_iter()
            .map(|c| evaluate_cell(config, data, labels, c))
            .collect()
    }))
}
