//! Steepest-descent searches over LAP-projected neighborhoods.
//!
//! A step solves one LAP per neighborhood in the mode's scan order (one per
//! dimension for VLSN, one per dimension subset for order-K VNS), applies
//! the best strictly improving candidate, and repeats until none improves.
//! Multi-start fans independent descents out across worker threads — each
//! with its own solver scratch — and reduces deterministically by
//! `(objective, start index)`, so results are independent of thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::instance::CostArray;
use crate::landscape::{explore, GraphCaps, LandscapeGraph};
use crate::lap::LapSolver;
use crate::moves::{best_improving, MovePlan};
use crate::perm::Permutation;
use crate::solution::{Assignment, DEFAULT_ENUMERATION_CAP};
use crate::{Error, Objective, Result};

pub use crate::moves::NeighborhoodMode;

/// How the starting solutions of a multi-start run are produced.
#[derive(Clone, Debug)]
pub enum StartStrategy {
    /// Caller-supplied starting solutions, used as given.
    Explicit(Vec<Assignment>),
    /// `mu` independent uniformly random solutions from a seeded stream.
    Random { seed: u64, mu: usize },
    /// All `N^(D-1)` combinations of cyclic column shifts.
    Grid,
}

/// Configuration for [`multi_start`].
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub mode: NeighborhoodMode,
    pub starts: StartStrategy,
    /// Record the full (solution, objective) trajectory of every start.
    /// Sinks and counters are always recorded.
    pub record_trajectories: bool,
    /// Additionally explore and record the improving-move digraph reachable
    /// from the starts (same candidate generator as the descent).
    pub record_landscape: bool,
    /// Caps applied when `record_landscape` is set.
    pub caps: GraphCaps,
}

impl SearchConfig {
    pub fn new(mode: NeighborhoodMode, starts: StartStrategy) -> Self {
        SearchConfig {
            mode,
            starts,
            record_trajectories: false,
            record_landscape: false,
            caps: GraphCaps::default(),
        }
    }
}

/// One descent from one start.
#[derive(Clone, Debug)]
pub struct DescentRecord {
    pub start: Assignment,
    pub start_value: Objective,
    pub sink: Assignment,
    pub sink_value: Objective,
    pub moves: u64,
    pub lap_solves: u64,
    /// `(solution, objective)` per accepted state, start first, sink last;
    /// empty when trajectory recording was disabled.
    pub trajectory: Vec<(Assignment, Objective)>,
}

/// Outcome of a (multi-start) search.
#[derive(Debug)]
pub struct SearchResult {
    pub best: Assignment,
    pub best_value: Objective,
    pub starts: usize,
    pub moves: u64,
    pub lap_solves: u64,
    pub runs: Vec<DescentRecord>,
    pub landscape: Option<LandscapeGraph>,
}

/// Steepest descent in the given VLSN neighborhood (`VlsnAllDims` or
/// `VlsnNoDim1`); ties between equal-valued dimensions resolve to the
/// smallest dimension.
pub fn vlsn_descend(c: &CostArray, start: &Assignment, mode: NeighborhoodMode) -> Result<DescentRecord> {
    if !mode.is_vlsn() {
        return Err(Error::Config(format!(
            "vlsn_descend expects a VLSN mode, got {mode}"
        )));
    }
    descend(c, start, mode)
}

/// Steepest descent in an order-K VNS neighborhood (`VnsOrder(K)` or
/// `VnsAllOrders`); ties resolve to excluding-dimension-1 subsets first,
/// then the lexicographically smallest subset.
pub fn vns_descend(c: &CostArray, start: &Assignment, mode: NeighborhoodMode) -> Result<DescentRecord> {
    if !mode.is_vns() {
        return Err(Error::Config(format!(
            "vns_descend expects a VNS mode, got {mode}"
        )));
    }
    descend(c, start, mode)
}

/// Steepest descent from `start` under any neighborhood mode, recording the
/// full trajectory.
pub fn descend(c: &CostArray, start: &Assignment, mode: NeighborhoodMode) -> Result<DescentRecord> {
    let plan = MovePlan::new(c.d(), mode)?;
    let mut solver = LapSolver::new();
    descend_with(c, start, &plan, &mut solver, true)
}

fn descend_with(
    c: &CostArray,
    start: &Assignment,
    plan: &MovePlan,
    solver: &mut LapSolver,
    record_trajectory: bool,
) -> Result<DescentRecord> {
    let start_value = c.evaluate(start)?;
    let mut current = start.clone();
    let mut value = start_value;
    let mut trajectory = Vec::new();
    if record_trajectory {
        trajectory.push((current.clone(), value));
    }
    let mut moves = 0u64;
    let mut lap_solves = 0u64;
    loop {
        let (chosen, solves) = best_improving(c, &current, value, plan, solver)?;
        lap_solves += solves;
        match chosen {
            None => break,
            Some(m) => {
                debug_assert!(m.value < value, "accepted moves strictly improve");
                current = m.next;
                value = m.value;
                moves += 1;
                if record_trajectory {
                    trajectory.push((current.clone(), value));
                }
            }
        }
    }
    Ok(DescentRecord {
        start: start.clone(),
        start_value,
        sink: current,
        sink_value: value,
        moves,
        lap_solves,
        trajectory,
    })
}

/// `mu` random starting solutions from a ChaCha8 stream seeded with `seed`.
pub fn make_random_starts(d: usize, n: usize, mu: usize, seed: u64) -> Result<Vec<Assignment>> {
    if mu == 0 {
        return Err(Error::Config("mu must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..mu).map(|_| Assignment::random(d, n, &mut rng)).collect()
}

/// The deterministic grid of all `N^(D-1)` cyclic-shift solutions: every
/// tuple `(t_2, ..., t_D)` in `{0..N-1}^(D-1)` (dimension 2 slowest) maps
/// to the solution whose dimension-`d` column is the shift by `t_d`.
pub fn make_grid_starts(d: usize, n: usize, cap: u64) -> Result<Vec<Assignment>> {
    let mut total: u64 = 1;
    for _ in 2..=d {
        total = total
            .checked_mul(n as u64)
            .ok_or_else(|| Error::Range(format!("N^(D-1) overflows for N={n}, D={d}")))?;
    }
    if total > cap {
        return Err(Error::CapExceeded {
            what: "grid start generation",
            required: total,
            cap,
        });
    }
    let shifts: Vec<Permutation> = (0..n).map(|t| Permutation::cyclic_shift(n, t)).collect();
    let mut starts = Vec::with_capacity(total as usize);
    let mut tuple = vec![0usize; d - 1];
    loop {
        let columns: Vec<Permutation> = tuple.iter().map(|&t| shifts[t].clone()).collect();
        starts.push(Assignment::from_columns(&columns)?);
        // Increment the tuple, last position fastest.
        let mut pos = d - 1;
        loop {
            if pos == 0 {
                return Ok(starts);
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

fn resolve_starts(c: &CostArray, strategy: &StartStrategy) -> Result<Vec<Assignment>> {
    match strategy {
        StartStrategy::Explicit(list) => {
            if list.is_empty() {
                return Err(Error::Config("explicit start list is empty".into()));
            }
            Ok(list.clone())
        }
        StartStrategy::Random { seed, mu } => make_random_starts(c.d(), c.n(), *mu, *seed),
        StartStrategy::Grid => make_grid_starts(c.d(), c.n(), DEFAULT_ENUMERATION_CAP),
    }
}

/// Runs an independent steepest descent from every start and keeps the best
/// sink; ties between equal sinks resolve to the earliest start index.
pub fn multi_start(c: &CostArray, config: &SearchConfig) -> Result<SearchResult> {
    let starts = resolve_starts(c, &config.starts)?;
    let plan = MovePlan::new(c.d(), config.mode)?;
    let record = config.record_trajectories;
    let runs: Vec<DescentRecord> = starts
        .par_iter()
        .map_init(LapSolver::new, |solver, s| {
            descend_with(c, s, &plan, solver, record)
        })
        .collect::<Result<_>>()?;

    let best_idx = runs
        .iter()
        .enumerate()
        .min_by_key(|(i, r)| (r.sink_value, *i))
        .map(|(i, _)| i)
        .expect("at least one start");
    let landscape = if config.record_landscape {
        Some(explore(c, &starts, config.mode, config.caps)?)
    } else {
        None
    };
    Ok(SearchResult {
        best: runs[best_idx].sink.clone(),
        best_value: runs[best_idx].sink_value,
        starts: starts.len(),
        moves: runs.iter().map(|r| r.moves).sum(),
        lap_solves: runs.iter().map(|r| r.lap_solves).sum(),
        runs,
        landscape,
    })
}
