//! Subcommand implementations. Every command executes from its replayable
//! `CommandSpec`, so a direct invocation and `mapland rerun` share one code
//! path and therefore produce identical outputs.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use mapland_core::analysis::{
    self, BatchStats, RunSummary, SinkRecord,
};
use mapland_core::instance::{self, CostArray, InstanceSpec};
use mapland_core::landscape::{self, GraphCaps, LandscapeGraph};
use mapland_core::search::{self, SearchConfig, StartStrategy};
use mapland_core::solution::{self, Assignment, DEFAULT_ENUMERATION_CAP};
use mapland_core::Error;
use rayon::prelude::*;

use crate::cli::{parse_algo, parse_dims_range, StartsArg};
use crate::fsio;
use crate::manifest::{CommandSpec, RunManifest};
use crate::rows::{
    DeltaRow, FdcRow, FdcSummaryRow, InstanceRow, RunRow, SinkRow, SolveRow, SummaryRow,
};

/// A structural check that completed but did not hold. Mapped to its own
/// exit code, distinct from configuration and I/O problems.
#[derive(Debug)]
pub struct VerificationFailure(pub String);

impl fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailure {}

/// Cross-command execution context.
pub struct Ctx {
    pub jobs: Option<usize>,
    pub timings: bool,
}

impl Ctx {
    /// Elapsed milliseconds when timings are on, 0 otherwise.
    fn ms_since(&self, t0: Instant) -> u64 {
        if self.timings {
            t0.elapsed().as_millis() as u64
        } else {
            0
        }
    }
}

struct CmdOutcome {
    outputs: Vec<String>,
    /// Set when a verification ran and did not hold; reported after all
    /// outputs (including the manifest) are safely on disk.
    failure: Option<String>,
}

impl CmdOutcome {
    fn ok(outputs: Vec<String>) -> Self {
        CmdOutcome {
            outputs,
            failure: None,
        }
    }
}

/// Runs one command spec, writing outputs and the manifest under `out`.
pub fn run_command(spec: &CommandSpec, out: Option<&Path>, ctx: &Ctx) -> anyhow::Result<()> {
    let t0 = Instant::now();
    if let Some(dir) = out {
        fsio::ensure_dir(dir)?;
    }
    let outcome = match spec {
        CommandSpec::Generate { .. } => cmd_generate(spec, require_out(out)?, ctx)?,
        CommandSpec::Solve { .. } => cmd_solve(spec, out, ctx)?,
        CommandSpec::Compare { .. } => cmd_compare(spec, require_out(out)?, ctx)?,
        CommandSpec::Multistart { .. } => cmd_multistart(spec, require_out(out)?, ctx)?,
        CommandSpec::Explore { .. } => cmd_explore(spec, require_out(out)?, ctx)?,
        CommandSpec::VerifyHypercube { .. } => cmd_verify_hypercube(spec, out)?,
        CommandSpec::AnalyzeFdc { .. } => cmd_analyze_fdc(spec, require_out(out)?, ctx)?,
    };
    if let Some(dir) = out {
        let manifest = RunManifest {
            tool: crate::manifest::tool_name().to_string(),
            version: crate::manifest::tool_version().to_string(),
            command: spec.clone(),
            jobs: ctx.jobs,
            timings: ctx.timings,
            out: Some(dir.display().to_string()),
            outputs: outcome.outputs,
            wall_ms: ctx.ms_since(t0),
        };
        manifest.save(dir)?;
    }
    match outcome.failure {
        Some(msg) => Err(VerificationFailure(msg).into()),
        None => Ok(()),
    }
}

/// Replays the command stored in a manifest, optionally redirecting output.
pub fn rerun(manifest_path: &Path, out_override: Option<&Path>, ctx: &Ctx) -> anyhow::Result<()> {
    let manifest = RunManifest::load(manifest_path)?;
    let original = manifest.out.as_ref().map(PathBuf::from);
    let out = out_override
        .map(Path::to_path_buf)
        .or(original)
        .ok_or_else(|| Error::Config("manifest has no output directory and no --out was given".into()))?;
    eprintln!(
        "rerunning '{}' from {} into {}",
        manifest.command.name(),
        manifest_path.display(),
        out.display()
    );
    run_command(&manifest.command, Some(&out), ctx)
}

fn require_out(out: Option<&Path>) -> anyhow::Result<&Path> {
    out.ok_or_else(|| Error::Config("this command requires --out".into()).into())
}

fn read_instance_at(path: &Path) -> anyhow::Result<(CostArray, u64)> {
    instance::read_instance(path)
        .with_context(|| format!("reading instance {}", path.display()))
}

fn caps_from(node_cap: u64, edge_cap: u64) -> GraphCaps {
    GraphCaps {
        max_nodes: node_cap,
        max_edges: edge_cap,
    }
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

fn cmd_generate(spec: &CommandSpec, out: &Path, _ctx: &Ctx) -> anyhow::Result<CmdOutcome> {
    let CommandSpec::Generate {
        dims,
        card,
        count,
        seed,
        low,
        high,
        max_bytes,
    } = spec
    else {
        unreachable!("dispatch mismatch")
    };
    let (d, n) = (*dims, *card);

    // Refuse up front when the estimated output size is out of budget. Each
    // instance stores 8 bytes per coefficient plus a fixed header/checksum.
    let payload = CostArray::payload_bytes(d, n).ok_or_else(|| Error::Range(format!(
        "coefficient payload of a D={d}, N={n} instance does not fit in u64"
    )))?;
    let per_instance = payload + instance_overhead_bytes();
    let estimated = per_instance
        .checked_mul(*count)
        .ok_or_else(|| Error::Range("total byte estimate does not fit in u64".into()))?;
    if estimated > *max_bytes {
        return Err(Error::CapExceeded {
            what: "estimated instance bytes (about 8*N^D per instance)",
            required: estimated,
            cap: *max_bytes,
        }
        .into());
    }

    let indices: Vec<u64> = (0..*count).collect();
    let written: Vec<Vec<String>> = indices
        .par_iter()
        .map(|&i| -> anyhow::Result<Vec<String>> {
            let mut spec_i = InstanceSpec::new(d, n, seed + i);
            spec_i.low = *low;
            spec_i.high = *high;
            let array = match fsio::cache_read(&spec_i) {
                Some(array) => array,
                None => {
                    let array = instance::generate(&spec_i)?;
                    fsio::cache_write(&spec_i, &array);
                    array
                }
            };
            let name = format!("inst{i:05}_d{d}_n{n}_s{}.mapc", spec_i.seed);
            let path = out.join(&name);
            instance::write_instance_with_sidecar(&array, &spec_i, &path)?;
            let sidecar = instance::sidecar_path(&path);
            Ok(vec![
                name,
                sidecar
                    .file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default(),
            ])
        })
        .collect::<anyhow::Result<_>>()?;

    let mut outputs: Vec<String> = written.into_iter().flatten().collect();
    outputs.sort();
    println!(
        "generated {count} instance(s) with D={d}, N={n}, seeds {seed}..{} into {}",
        seed + count,
        out.display()
    );
    Ok(CmdOutcome::ok(outputs))
}

/// Fixed per-file overhead: 20-byte header plus 8-byte checksum.
fn instance_overhead_bytes() -> u64 {
    28
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

fn cmd_solve(spec: &CommandSpec, out: Option<&Path>, ctx: &Ctx) -> anyhow::Result<CmdOutcome> {
    let CommandSpec::Solve {
        instance: instance_path,
        algo,
        start,
        start_seed,
        check_optimum_cap,
        export_graph,
        node_cap,
        edge_cap,
    } = spec
    else {
        unreachable!("dispatch mismatch")
    };
    if *export_graph && out.is_none() {
        return Err(Error::Config("--export-graph requires --out".into()).into());
    }
    let path = Path::new(instance_path);
    let (c, seed) = read_instance_at(path)?;
    let id = fsio::instance_id(path);
    let mode = parse_algo(algo)?;
    let start_solution = resolve_single_start(&c, start, *start_seed)?;

    let t0 = Instant::now();
    let record = if mode.is_vlsn() {
        search::vlsn_descend(&c, &start_solution, mode)?
    } else {
        search::vns_descend(&c, &start_solution, mode)?
    };
    let wall_ms = ctx.ms_since(t0);

    println!(
        "instance {id} (D={}, N={}, seed={seed})",
        c.d(),
        c.n()
    );
    println!("algo {algo}  start {}", record.start.encode());
    println!(
        "y_start {}  y {}  moves {}  lap_solves {}",
        record.start_value, record.sink_value, record.moves, record.lap_solves
    );
    println!("sink {}", record.sink.encode());

    let optimum = exhaustive_optimum(&c, *check_optimum_cap)?;
    let optimum_reached = optimum.map(|y_star| {
        let reached = record.sink_value == y_star;
        println!(
            "exhaustive optimum {y_star}: {}",
            if reached { "reached" } else { "missed" }
        );
        reached
    });

    let mut outputs = Vec::new();
    if let Some(dir) = out {
        let row = SolveRow {
            instance_id: id.clone(),
            d: c.d(),
            n: c.n(),
            seed,
            algo: algo.clone(),
            start: record.start.encode(),
            y_start: record.start_value,
            y: record.sink_value,
            sink: record.sink.encode(),
            moves: record.moves,
            lap_solves: record.lap_solves,
            optimum,
            optimum_reached,
            wall_ms,
        };
        fsio::write_csv(&dir.join("solve.csv"), &[row])?;
        outputs.push("solve.csv".to_string());

        if *export_graph {
            let g = landscape::explore(
                &c,
                std::slice::from_ref(&start_solution),
                mode,
                caps_from(*node_cap, *edge_cap),
            )?;
            outputs.extend(export_graph_files(dir, &g, &id, algo)?);
            println!(
                "explored digraph: {} nodes, {} edges, {} sink(s)",
                g.node_count(),
                g.edge_count(),
                g.sink_count()
            );
        }
    }
    Ok(CmdOutcome::ok(outputs))
}

/// Scans the full solution space when it is small enough; `cap == 0`
/// disables the check entirely.
fn exhaustive_optimum(c: &CostArray, cap: u64) -> anyhow::Result<Option<i64>> {
    if cap == 0 {
        return Ok(None);
    }
    match solution::count_solutions(c.d(), c.n()) {
        Ok(total) if total <= cap => {
            let mut best = i64::MAX;
            for s in solution::enumerate_solutions(c.d(), c.n(), cap)? {
                best = best.min(c.evaluate(&s)?);
            }
            Ok(Some(best))
        }
        _ => Ok(None),
    }
}

fn resolve_single_start(
    c: &CostArray,
    start: &str,
    start_seed: u64,
) -> anyhow::Result<Assignment> {
    match start {
        "identity" => Ok(Assignment::identity(c.d(), c.n())?),
        "random" => Ok(search::make_random_starts(c.d(), c.n(), 1, start_seed)?
            .pop()
            .expect("mu=1 yields one start")),
        encoding => {
            let s = Assignment::parse(encoding)?;
            check_start_shape(c, &s)?;
            Ok(s)
        }
    }
}

fn check_start_shape(c: &CostArray, s: &Assignment) -> anyhow::Result<()> {
    if s.d() != c.d() || s.n() != c.n() {
        return Err(Error::Config(format!(
            "start has shape D={}, N={} but the instance needs D={}, N={}",
            s.d(),
            s.n(),
            c.d(),
            c.n()
        ))
        .into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

fn cmd_compare(spec: &CommandSpec, out: &Path, ctx: &Ctx) -> anyhow::Result<CmdOutcome> {
    let CommandSpec::Compare {
        batch,
        algo_a,
        algo_b,
        start_seed,
        node_cap,
        edge_cap,
    } = spec
    else {
        unreachable!("dispatch mismatch")
    };
    let mode_a = parse_algo(algo_a)?;
    let mode_b = parse_algo(algo_b)?;
    let caps = caps_from(*node_cap, *edge_cap);
    let files = fsio::list_instances(Path::new(batch))?;
    if files.is_empty() {
        return Err(Error::Config(format!("no .mapc instances found in {batch}")).into());
    }

    struct PairResult {
        rows: [InstanceRow; 2],
        delta: DeltaRow,
        summary_a: RunSummary,
        summary_b: RunSummary,
    }

    // One shared random start per instance (mu = 1 by construction), both
    // algorithms descending and exploring from exactly that solution.
    let results: Vec<PairResult> = files
        .par_iter()
        .enumerate()
        .map(|(idx, path)| -> anyhow::Result<PairResult> {
            let (c, seed) = read_instance_at(path)?;
            let id = fsio::instance_id(path);
            let start = search::make_random_starts(c.d(), c.n(), 1, start_seed + idx as u64)?
                .pop()
                .expect("mu=1 yields one start");
            let mut rows = Vec::with_capacity(2);
            let mut summaries = Vec::with_capacity(2);
            for (algo, mode) in [(algo_a, mode_a), (algo_b, mode_b)] {
                let t0 = Instant::now();
                let record = if mode.is_vlsn() {
                    search::vlsn_descend(&c, &start, mode)?
                } else {
                    search::vns_descend(&c, &start, mode)?
                };
                let wall_ms = ctx.ms_since(t0);
                let g = landscape::explore(&c, std::slice::from_ref(&start), mode, caps)?;
                rows.push(InstanceRow {
                    instance_id: id.clone(),
                    d: c.d(),
                    n: c.n(),
                    seed,
                    algo: algo.clone(),
                    y: record.sink_value,
                    nodes: g.node_count() as u64,
                    edges: g.edge_count() as u64,
                    sinks: g.sink_count(),
                    sources: g.source_count(),
                    lap_solves: record.lap_solves,
                    wall_ms,
                });
                summaries.push(RunSummary {
                    objective: record.sink_value,
                    lap_solves: record.lap_solves,
                });
            }
            let [row_a, row_b]: [InstanceRow; 2] =
                rows.try_into().expect("two algorithms per instance");
            let summary_b = summaries.pop().expect("two summaries");
            let summary_a = summaries.pop().expect("two summaries");
            let delta = DeltaRow {
                instance_id: id,
                d: c.d(),
                n: c.n(),
                seed,
                algo_a: algo_a.clone(),
                algo_b: algo_b.clone(),
                y_a: row_a.y,
                y_b: row_b.y,
                delta_y: row_b.y - row_a.y,
                lap_solves_a: row_a.lap_solves,
                lap_solves_b: row_b.lap_solves,
                lap_ratio: (row_a.lap_solves > 0)
                    .then(|| row_b.lap_solves as f64 / row_a.lap_solves as f64),
                nodes_a: row_a.nodes,
                nodes_b: row_b.nodes,
            };
            Ok(PairResult {
                rows: [row_a, row_b],
                delta,
                summary_a,
                summary_b,
            })
        })
        .collect::<anyhow::Result<_>>()?;

    // Rows are ordered by instance index, then by algorithm flag order.
    let per_instance: Vec<InstanceRow> = results.iter().flat_map(|r| r.rows.clone()).collect();
    let deltas: Vec<DeltaRow> = results.iter().map(|r| r.delta.clone()).collect();
    let runs_a: Vec<RunSummary> = results.iter().map(|r| r.summary_a.clone()).collect();
    let runs_b: Vec<RunSummary> = results.iter().map(|r| r.summary_b.clone()).collect();

    let comparison = analysis::compare_algorithms(&runs_a, &runs_b)?;
    let summary = compare_summary_rows(algo_a, algo_b, &per_instance, &comparison);

    fsio::write_csv(&out.join("per_instance.csv"), &per_instance)?;
    fsio::write_csv(&out.join("deltas.csv"), &deltas)?;
    fsio::write_csv(&out.join("summary.csv"), &summary)?;

    let d = comparison.objective_delta;
    println!(
        "compared {} instance pair(s): mean delta_y ({algo_b} - {algo_a}) = {:.4}, mean +/- 2*std = [{:.4}, {:.4}]",
        comparison.pairs, d.mean, d.ci_lo, d.ci_hi
    );
    if let Some(r) = &comparison.lap_solve_ratio {
        println!(
            "mean LAP-solve ratio ({algo_b} / {algo_a}) = {:.4} over {} pair(s) ({} excluded for zero baseline)",
            r.mean, r.count, comparison.ratio_exclusions
        );
    }
    Ok(CmdOutcome::ok(vec![
        "deltas.csv".into(),
        "per_instance.csv".into(),
        "summary.csv".into(),
    ]))
}

fn compare_summary_rows(
    algo_a: &str,
    algo_b: &str,
    per_instance: &[InstanceRow],
    comparison: &analysis::Comparison,
) -> Vec<SummaryRow> {
    let of = |metric: &str, algo: &str, pick: &dyn Fn(&InstanceRow) -> f64| -> Option<SummaryRow> {
        let values: Vec<f64> = per_instance
            .iter()
            .filter(|r| r.algo == algo)
            .map(pick)
            .collect();
        BatchStats::from_values(&values).map(|s| SummaryRow::from_stats(metric, algo, &s))
    };
    let mut rows = Vec::new();
    for algo in [algo_a, algo_b] {
        rows.extend(of("y", algo, &|r| r.y as f64));
    }
    rows.push(SummaryRow::from_stats(
        "delta_y",
        &format!("{algo_b}-{algo_a}"),
        &comparison.objective_delta,
    ));
    for algo in [algo_a, algo_b] {
        rows.extend(of("lap_solves", algo, &|r| r.lap_solves as f64));
    }
    if let Some(ratio) = &comparison.lap_solve_ratio {
        rows.push(SummaryRow::from_stats(
            "lap_ratio",
            &format!("{algo_b}/{algo_a}"),
            ratio,
        ));
    }
    for metric in ["nodes", "edges", "sinks"] {
        for algo in [algo_a, algo_b] {
            rows.extend(of(metric, algo, &|r| match metric {
                "nodes" => r.nodes as f64,
                "edges" => r.edges as f64,
                _ => r.sinks as f64,
            }));
        }
    }
    rows
}

// ---------------------------------------------------------------------------
// multistart
// ---------------------------------------------------------------------------

fn cmd_multistart(spec: &CommandSpec, out: &Path, ctx: &Ctx) -> anyhow::Result<CmdOutcome> {
    let CommandSpec::Multistart {
        instance: instance_path,
        algo,
        starts,
        mu,
        start_seed,
        starts_file,
        node_cap,
        edge_cap,
    } = spec
    else {
        unreachable!("dispatch mismatch")
    };
    let path = Path::new(instance_path);
    let (c, seed) = read_instance_at(path)?;
    let id = fsio::instance_id(path);
    let mode = parse_algo(algo)?;
    let kind = StartsArg::parse_name(starts)?;

    let strategy = match kind {
        StartsArg::Random => StartStrategy::Random {
            seed: *start_seed,
            mu: resolve_mu(&c, *mu)?,
        },
        StartsArg::Grid => StartStrategy::Grid,
        StartsArg::File => StartStrategy::Explicit(read_starts_file(
            &c,
            starts_file.as_deref(),
        )?),
        StartsArg::All => {
            return Err(Error::Config(
                "multistart does not support --starts all; use explore".into(),
            )
            .into())
        }
    };

    let mut config = SearchConfig::new(mode, strategy);
    config.record_landscape = true;
    config.caps = caps_from(*node_cap, *edge_cap);

    let t0 = Instant::now();
    let result = search::multi_start(&c, &config)?;
    let wall_ms = ctx.ms_since(t0);
    let g = result
        .landscape
        .as_ref()
        .expect("landscape recording was requested");

    let run_rows: Vec<RunRow> = result
        .runs
        .iter()
        .enumerate()
        .map(|(i, r)| RunRow {
            instance_id: id.clone(),
            algo: algo.clone(),
            start_index: i,
            start: r.start.encode(),
            y_start: r.start_value,
            sink: r.sink.encode(),
            y_sink: r.sink_value,
            moves: r.moves,
            lap_solves: r.lap_solves,
        })
        .collect();
    let instance_row = InstanceRow {
        instance_id: id.clone(),
        d: c.d(),
        n: c.n(),
        seed,
        algo: algo.clone(),
        y: result.best_value,
        nodes: g.node_count() as u64,
        edges: g.edge_count() as u64,
        sinks: g.sink_count(),
        sources: g.source_count(),
        lap_solves: result.lap_solves,
        wall_ms,
    };
    let sink_rows = sink_rows_for(g, &id, algo);

    fsio::write_csv(&out.join("per_instance.csv"), &[instance_row])?;
    fsio::write_csv(&out.join("runs.csv"), &run_rows)?;
    fsio::write_csv(&out.join("sinks.csv"), &sink_rows)?;

    println!(
        "multistart on {id}: {} start(s), best y = {} at {}",
        result.starts,
        result.best_value,
        result.best.encode()
    );
    println!(
        "landscape: {} nodes, {} edges, {} source(s), {} sink(s)",
        g.node_count(),
        g.edge_count(),
        g.source_count(),
        g.sink_count()
    );
    Ok(CmdOutcome::ok(vec![
        "per_instance.csv".into(),
        "runs.csv".into(),
        "sinks.csv".into(),
    ]))
}

/// Default random-start count: one per grid cell, `N^(D-1)`.
fn resolve_mu(c: &CostArray, mu: Option<usize>) -> anyhow::Result<usize> {
    if let Some(mu) = mu {
        if mu == 0 {
            return Err(Error::Config("--mu must be at least 1".into()).into());
        }
        return Ok(mu);
    }
    let default = (c.n() as u64)
        .checked_pow((c.d() - 1) as u32)
        .filter(|&m| m <= DEFAULT_ENUMERATION_CAP)
        .ok_or_else(|| {
            Error::Config(format!(
                "default mu = N^(D-1) is too large for D={}, N={}; pass --mu explicitly",
                c.d(),
                c.n()
            ))
        })?;
    Ok(default as usize)
}

fn read_starts_file(c: &CostArray, path: Option<&str>) -> anyhow::Result<Vec<Assignment>> {
    let path = path.ok_or_else(|| Error::Config("--starts file requires --starts-file".into()))?;
    let text = fs::read_to_string(path)
        .map_err(Error::from)
        .with_context(|| format!("reading starts file {path}"))?;
    let mut starts = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let s = Assignment::parse(line)
            .with_context(|| format!("starts file {path}, line {}", lineno + 1))?;
        check_start_shape(c, &s)?;
        starts.push(s);
    }
    if starts.is_empty() {
        return Err(Error::Config(format!("starts file {path} contains no solutions")).into());
    }
    Ok(starts)
}

// ---------------------------------------------------------------------------
// explore
// ---------------------------------------------------------------------------

fn cmd_explore(spec: &CommandSpec, out: &Path, _ctx: &Ctx) -> anyhow::Result<CmdOutcome> {
    let CommandSpec::Explore {
        instance: instance_path,
        algo,
        starts,
        mu,
        start_seed,
        starts_file,
        node_cap,
        edge_cap,
    } = spec
    else {
        unreachable!("dispatch mismatch")
    };
    let path = Path::new(instance_path);
    let (c, _) = read_instance_at(path)?;
    let id = fsio::instance_id(path);
    let mode = parse_algo(algo)?;
    let kind = StartsArg::parse_name(starts)?;
    let caps = caps_from(*node_cap, *edge_cap);

    let g = match kind {
        StartsArg::All => landscape::enumerate_landscape(&c, mode, caps)?,
        _ => {
            let start_list = match kind {
                StartsArg::Random => {
                    search::make_random_starts(c.d(), c.n(), mu.unwrap_or(1), *start_seed)?
                }
                StartsArg::Grid => make_grid(&c)?,
                StartsArg::File => read_starts_file(&c, starts_file.as_deref())?,
                StartsArg::All => unreachable!(),
            };
            landscape::explore(&c, &start_list, mode, caps)?
        }
    };

    let outputs = export_graph_files(out, &g, &id, algo)?;
    let stats = g.stats();
    println!(
        "explored {id} with {algo}: {} nodes, {} edges, {} source(s), {} sink(s), {} LAP solves",
        stats.n_nodes,
        stats.n_edges,
        stats.n_sources,
        stats.n_sinks,
        g.lap_solves()
    );
    Ok(CmdOutcome::ok(outputs))
}

fn make_grid(c: &CostArray) -> anyhow::Result<Vec<Assignment>> {
    Ok(search::make_grid_starts(c.d(), c.n(), DEFAULT_ENUMERATION_CAP)?)
}

/// Writes nodes.txt, edges.txt, stats.json, and sinks.csv for a graph.
fn export_graph_files(
    dir: &Path,
    g: &LandscapeGraph,
    id: &str,
    algo: &str,
) -> anyhow::Result<Vec<String>> {
    let mut nodes = Vec::new();
    g.write_node_table(&mut nodes)?;
    fsio::atomic_write(&dir.join("nodes.txt"), &nodes)?;

    let mut edges = Vec::new();
    g.write_edge_list(&mut edges)?;
    fsio::atomic_write(&dir.join("edges.txt"), &edges)?;

    fsio::write_json(&dir.join("stats.json"), &g.stats())?;
    fsio::write_csv(&dir.join("sinks.csv"), &sink_rows_for(g, id, algo))?;
    Ok(vec![
        "edges.txt".into(),
        "nodes.txt".into(),
        "sinks.csv".into(),
        "stats.json".into(),
    ])
}

fn sink_rows_for(g: &LandscapeGraph, id: &str, algo: &str) -> Vec<SinkRow> {
    analysis::sink_records(g)
        .into_iter()
        .map(|r| SinkRow {
            instance_id: id.to_string(),
            algo: algo.to_string(),
            sink_id: r.node,
            fitness: r.objective,
            distance: r.distance,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// verify-hypercube
// ---------------------------------------------------------------------------

fn cmd_verify_hypercube(spec: &CommandSpec, out: Option<&Path>) -> anyhow::Result<CmdOutcome> {
    let CommandSpec::VerifyHypercube { dims } = spec else {
        unreachable!("dispatch mismatch")
    };
    let (lo, hi) = parse_dims_range(dims)?;
    let mut reports = Vec::new();
    let mut failed = Vec::new();
    for d in lo..=hi {
        let report = landscape::verify_hypercube(d)?;
        println!(
            "D={d}: {}  nodes={}  skeleton_edges={}/{}  diagonals={}/{}",
            if report.passed { "PASS" } else { "FAIL" },
            report.nodes,
            report.skeleton_edges,
            report.expected_skeleton_edges,
            report.diagonals,
            report.expected_diagonals
        );
        if !report.passed {
            for f in report.failures.iter().take(5) {
                println!("  failure: {f}");
            }
            failed.push(d);
        }
        reports.push(report);
    }
    let mut outputs = Vec::new();
    if let Some(dir) = out {
        fsio::write_json(&dir.join("hypercube.json"), &reports)?;
        outputs.push("hypercube.json".to_string());
    }
    let failure = (!failed.is_empty()).then(|| {
        format!(
            "hypercube structure check failed for D in {failed:?} (see report above)"
        )
    });
    Ok(CmdOutcome { outputs, failure })
}

// ---------------------------------------------------------------------------
// analyze-fdc
// ---------------------------------------------------------------------------

fn cmd_analyze_fdc(spec: &CommandSpec, out: &Path, _ctx: &Ctx) -> anyhow::Result<CmdOutcome> {
    let CommandSpec::AnalyzeFdc {
        batch,
        algo,
        mu,
        start_seed,
        node_cap,
        edge_cap,
    } = spec
    else {
        unreachable!("dispatch mismatch")
    };
    if *mu == 0 {
        return Err(Error::Config("--mu must be at least 1".into()).into());
    }
    let mode = parse_algo(algo)?;
    let caps = caps_from(*node_cap, *edge_cap);
    let files = fsio::list_instances(Path::new(batch))?;
    if files.is_empty() {
        return Err(Error::Config(format!("no .mapc instances found in {batch}")).into());
    }

    struct FdcResult {
        row: FdcRow,
        sinks: Vec<SinkRow>,
    }

    let results: Vec<FdcResult> = files
        .par_iter()
        .enumerate()
        .map(|(idx, path)| -> anyhow::Result<FdcResult> {
            let (c, seed) = read_instance_at(path)?;
            let id = fsio::instance_id(path);
            let starts =
                search::make_random_starts(c.d(), c.n(), *mu, start_seed + idx as u64)?;
            let g = landscape::explore(&c, &starts, mode, caps)?;
            let records: Vec<SinkRecord> = analysis::sink_records(&g);
            let rho = match analysis::fitness_distance_correlation(&records) {
                Ok(r) => Some(r),
                Err(Error::UndefinedCorrelation(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let sinks = records
                .into_iter()
                .map(|r| SinkRow {
                    instance_id: id.clone(),
                    algo: algo.clone(),
                    sink_id: r.node,
                    fitness: r.objective,
                    distance: r.distance,
                })
                .collect();
            Ok(FdcResult {
                row: FdcRow {
                    instance_id: id,
                    d: c.d(),
                    n: c.n(),
                    seed,
                    algo: algo.clone(),
                    mu: *mu,
                    sinks: g.sink_count(),
                    rho,
                },
                sinks,
            })
        })
        .collect::<anyhow::Result<_>>()?;

    let fdc_rows: Vec<FdcRow> = results.iter().map(|r| r.row.clone()).collect();
    let sink_rows: Vec<SinkRow> = results.iter().flat_map(|r| r.sinks.clone()).collect();

    // Plot-ready per-N aggregation over the defined coefficients.
    let mut by_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for row in &fdc_rows {
        if let Some(rho) = row.rho {
            by_n.entry(row.n).or_default().push(rho);
        }
    }
    let summary: Vec<FdcSummaryRow> = by_n
        .iter()
        .filter_map(|(&n, values)| {
            BatchStats::from_values(values).map(|s| FdcSummaryRow {
                n,
                count: s.count,
                mean: s.mean,
                std: s.std,
                ci_lo: s.ci_lo,
                ci_hi: s.ci_hi,
                min: s.min,
                max: s.max,
            })
        })
        .collect();

    fsio::write_csv(&out.join("fdc.csv"), &fdc_rows)?;
    fsio::write_csv(&out.join("sinks.csv"), &sink_rows)?;
    fsio::write_csv(&out.join("summary.csv"), &summary)?;

    let defined = fdc_rows.iter().filter(|r| r.rho.is_some()).count();
    println!(
        "analyzed {} instance(s): rho defined for {defined}",
        fdc_rows.len()
    );
    for s in &summary {
        println!(
            "N={}: mean rho = {:.4} over {} instance(s), range [{:.4}, {:.4}]",
            s.n, s.mean, s.count, s.min, s.max
        );
    }
    Ok(CmdOutcome::ok(vec![
        "fdc.csv".into(),
        "sinks.csv".into(),
        "summary.csv".into(),
    ]))
}
