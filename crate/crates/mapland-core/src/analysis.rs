//! Statistics over recorded landscapes: sink inventories, shortest-path
//! distances from the starting solutions, fitness-distance correlation, and
//! batch summaries for comparing search configurations.

use std::collections::VecDeque;

use serde::Serialize;

use crate::landscape::LandscapeGraph;
use crate::{Error, Objective, Result};

/// One local minimum of a recorded landscape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SinkRecord {
    /// Node id within the graph it was extracted from.
    pub node: u32,
    pub objective: Objective,
    /// Length (in moves) of the shortest improving path from any source;
    /// `None` when the graph has no sources (full enumerations).
    pub distance: Option<u64>,
}

/// Unit-length BFS distance from the nearest source to every node.
pub fn source_distances(g: &LandscapeGraph) -> Vec<Option<u64>> {
    let n = g.node_count();
    let mut head = vec![0usize; n + 1];
    for e in g.edges() {
        head[e.from as usize + 1] += 1;
    }
    for i in 0..n {
        head[i + 1] += head[i];
    }
    let mut adj = vec![0u32; g.edge_count()];
    let mut fill = head.clone();
    for e in g.edges() {
        adj[fill[e.from as usize]] = e.to;
        fill[e.from as usize] += 1;
    }

    let mut dist: Vec<Option<u64>> = vec![None; n];
    let mut queue = VecDeque::new();
    for id in 0..n {
        if g.is_source(id as u32) {
            dist[id] = Some(0);
            queue.push_back(id as u32);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize].unwrap();
        for &v in &adj[head[u as usize]..head[u as usize + 1]] {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Extracts every sink with its objective and source distance, in ascending
/// node-id (discovery) order.
pub fn sink_records(g: &LandscapeGraph) -> Vec<SinkRecord> {
    let dist = source_distances(g);
    g.sink_ids()
        .into_iter()
        .map(|id| SinkRecord {
            node: id,
            objective: g.objective(id),
            distance: dist[id as usize],
        })
        .collect()
}

/// Pearson correlation between sink objective and sink distance.
///
/// Only sinks with a defined distance participate. The correlation is
/// undefined (an error) with fewer than two such sinks or when either
/// coordinate has zero variance.
pub fn fitness_distance_correlation(records: &[SinkRecord]) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in records {
        if let Some(d) = r.distance {
            xs.push(r.objective as f64);
            ys.push(d as f64);
        }
    }
    if xs.len() < 2 {
        return Err(Error::UndefinedCorrelation(format!(
            "need at least two sinks with a defined distance, have {}",
            xs.len()
        )));
    }
    pearson(&xs, &ys)
}

/// Two-pass Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Config(format!(
            "correlation inputs differ in length: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::UndefinedCorrelation(format!(
            "need at least two points, have {n}"
        )));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation(
            "zero variance in one of the coordinates".into(),
        ));
    }
    Ok(sxy / (sxx.sqrt() * syy.sqrt()))
}

/// Summary of a batch of measurements. `ci_lo`/`ci_hi` bound the
/// mean ± 2·std spread band (sample standard deviation, not standard error).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BatchStats {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub min: f64,
    pub max: f64,
}

impl BatchStats {
    /// `None` on an empty batch; a single value has zero deviation.
    pub fn from_values(values: &[f64]) -> Option<BatchStats> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n == 1 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0)).sqrt()
        };
        let (mut min, mut max) = (values[0], values[0]);
        for &v in values {
            min = min.min(v);
            max = max.max(v);
        }
        Some(BatchStats {
            count: n,
            mean,
            std,
            ci_lo: mean - 2.0 * std,
            ci_hi: mean + 2.0 * std,
            min,
            max,
        })
    }
}

/// Outcome of one search run, reduced to what comparisons consume.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RunSummary {
    pub objective: Objective,
    pub lap_solves: u64,
}

/// Per-instance difference between two runs (second minus first).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairedDelta {
    pub objective_delta: i64,
    /// `lap_solves(b) / lap_solves(a)`; `None` when the baseline is zero.
    pub lap_solve_ratio: Option<f64>,
}

/// Paired comparison of two equally long run batches.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub pairs: usize,
    /// Stats over `objective(b) - objective(a)`; negative favors `b`.
    pub objective_delta: BatchStats,
    /// Stats over the defined effort ratios, if any survived exclusion.
    pub lap_solve_ratio: Option<BatchStats>,
    pub ratio_exclusions: usize,
}

/// Pairs runs positionally (same instance order in both batches).
pub fn paired_deltas(a: &[RunSummary], b: &[RunSummary]) -> Result<Vec<PairedDelta>> {
    if a.len() != b.len() {
        return Err(Error::Config(format!(
            "paired comparison needs equal batch sizes, got {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(ra, rb)| PairedDelta {
            objective_delta: rb.objective - ra.objective,
            lap_solve_ratio: if ra.lap_solves == 0 {
                None
            } else {
                Some(rb.lap_solves as f64 / ra.lap_solves as f64)
            },
        })
        .collect())
}

pub fn compare_algorithms(a: &[RunSummary], b: &[RunSummary]) -> Result<Comparison> {
    let deltas = paired_deltas(a, b)?;
    if deltas.is_empty() {
        return Err(Error::Config("nothing to compare: empty batches".into()));
    }
    let objective_delta =
        BatchStats::from_values(&deltas.iter().map(|d| d.objective_delta as f64).collect::<Vec<_>>())
            .expect("non-empty");
    let ratios: Vec<f64> = deltas.iter().filter_map(|d| d.lap_solve_ratio).collect();
    Ok(Comparison {
        pairs: deltas.len(),
        objective_delta,
        lap_solve_ratio: BatchStats::from_values(&ratios),
        ratio_exclusions: deltas.len() - ratios.len(),
    })
}
