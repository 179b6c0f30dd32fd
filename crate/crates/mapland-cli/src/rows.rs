//! CSV row schemas. Field order here is the documented column order.

use mapland_core::analysis::BatchStats;
use serde::Serialize;

/// One row per (instance, algorithm):
/// `instance_id, D, N, seed, algo, y, nodes, edges, sinks, sources, lap_solves, wall_ms`.
#[derive(Clone, Debug, Serialize)]
pub struct InstanceRow {
    pub instance_id: String,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub algo: String,
    pub y: i64,
    pub nodes: u64,
    pub edges: u64,
    pub sinks: u64,
    pub sources: u64,
    pub lap_solves: u64,
    pub wall_ms: u64,
}

/// One row per explored sink:
/// `instance_id, algo, sink_id, fitness, distance` (distance empty when no
/// source reaches the sink).
#[derive(Clone, Debug, Serialize)]
pub struct SinkRow {
    pub instance_id: String,
    pub algo: String,
    pub sink_id: u32,
    pub fitness: i64,
    pub distance: Option<u64>,
}

/// Paired per-instance deltas for `compare` (B minus A).
#[derive(Clone, Debug, Serialize)]
pub struct DeltaRow {
    pub instance_id: String,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub algo_a: String,
    pub algo_b: String,
    pub y_a: i64,
    pub y_b: i64,
    pub delta_y: i64,
    pub lap_solves_a: u64,
    pub lap_solves_b: u64,
    pub lap_ratio: Option<f64>,
    pub nodes_a: u64,
    pub nodes_b: u64,
}

/// One aggregate row per (metric, algo) pair in `summary.csv`.
#[derive(Clone, Debug, Serialize)]
pub struct SummaryRow {
    pub metric: String,
    pub algo: String,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub min: f64,
    pub max: f64,
}

impl SummaryRow {
    pub fn from_stats(metric: &str, algo: &str, stats: &BatchStats) -> Self {
        SummaryRow {
            metric: metric.to_string(),
            algo: algo.to_string(),
            count: stats.count,
            mean: stats.mean,
            std: stats.std,
            ci_lo: stats.ci_lo,
            ci_hi: stats.ci_hi,
            min: stats.min,
            max: stats.max,
        }
    }
}

/// Per-instance fitness-distance correlation row.
#[derive(Clone, Debug, Serialize)]
pub struct FdcRow {
    pub instance_id: String,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub algo: String,
    pub mu: usize,
    pub sinks: u64,
    /// Empty when the correlation is undefined (fewer than two measurable
    /// sinks, or zero variance).
    pub rho: Option<f64>,
}

/// Per-cardinality aggregate of defined correlation coefficients.
#[derive(Clone, Debug, Serialize)]
pub struct FdcSummaryRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub min: f64,
    pub max: f64,
}

/// One row per descent in `multistart` runs.csv.
#[derive(Clone, Debug, Serialize)]
pub struct RunRow {
    pub instance_id: String,
    pub algo: String,
    pub start_index: usize,
    pub start: String,
    pub y_start: i64,
    pub sink: String,
    pub y_sink: i64,
    pub moves: u64,
    pub lap_solves: u64,
}

/// Single-row schema for `solve --out`.
#[derive(Clone, Debug, Serialize)]
pub struct SolveRow {
    pub instance_id: String,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub algo: String,
    pub start: String,
    pub y_start: i64,
    pub y: i64,
    pub sink: String,
    pub moves: u64,
    pub lap_solves: u64,
    /// Exhaustive optimum, when the solution space was small enough to check.
    pub optimum: Option<i64>,
    pub optimum_reached: Option<bool>,
    pub wall_ms: u64,
}
