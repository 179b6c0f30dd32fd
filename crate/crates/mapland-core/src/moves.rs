//! Shared candidate-move generation for descent and landscape recording.
//!
//! Both the steepest-descent searches and the landscape explorer must see
//! *exactly* the same candidates in the same order — otherwise recorded
//! graphs and search trajectories drift apart. This module owns that single
//! source of truth: a [`MovePlan`] fixes the scan order of neighborhoods
//! for a `(D, mode)` pair, and the two entry points either pick the best
//! improving candidate (descent) or surface every improving candidate
//! (exploration).
//!
//! Tie-breaking is part of the contract:
//! - VLSN modes scan dimensions in increasing order and keep the first
//!   strict minimum, so the smallest dimension wins ties;
//! - VNS modes order equal-valued candidates by (excluding dimension 1
//!   first, then lexicographically smallest subset); the subset determines
//!   its order K, so no further clause is needed.

use crate::instance::CostArray;
use crate::lap::LapSolver;
use crate::perm::Permutation;
use crate::projection::{
    apply_move_single, apply_move_subset, project_single, project_subset, DimensionSubset,
    ProjectionMatrix,
};
use crate::solution::Assignment;
use crate::{Error, Result};

/// Neighborhood structure scanned at every step of a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeighborhoodMode {
    /// One single-dimension LAP per dimension `1..=D`.
    VlsnAllDims,
    /// One single-dimension LAP per dimension `2..=D`.
    VlsnNoDim1,
    /// Order-K subsets: the C(D-1, K) subsets of `{2..D}` of size K plus
    /// the C(D-1, K-1) subsets containing dimension 1.
    VnsOrder(usize),
    /// Union of `VnsOrder(K)` for `K = 1..=floor(D/2)`.
    VnsAllOrders,
}

impl NeighborhoodMode {
    /// Checks mode-specific constraints against a problem dimension.
    pub fn validate(&self, d: usize) -> Result<()> {
        if let NeighborhoodMode::VnsOrder(k) = *self {
            if k == 0 || k >= d || k > d - k {
                return Err(Error::Config(format!(
                    "VNS order K={k} must satisfy 1 <= K < D and K <= D-K for D={d}"
                )));
            }
        }
        Ok(())
    }

    pub fn is_vlsn(&self) -> bool {
        matches!(
            self,
            NeighborhoodMode::VlsnAllDims | NeighborhoodMode::VlsnNoDim1
        )
    }

    pub fn is_vns(&self) -> bool {
        !self.is_vlsn()
    }
}

impl std::fmt::Display for NeighborhoodMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NeighborhoodMode::VlsnAllDims => f.write_str("vlsn"),
            NeighborhoodMode::VlsnNoDim1 => f.write_str("vlsn-nod1"),
            NeighborhoodMode::VnsOrder(k) => write!(f, "vns:{k}"),
            NeighborhoodMode::VnsAllOrders => f.write_str("vns-all"),
        }
    }
}

/// One neighborhood in a plan: a single projected dimension or a subset.
#[derive(Clone, Debug)]
pub(crate) enum MoveScope {
    Single(usize),
    Subset(DimensionSubset),
}

impl MoveScope {
    pub(crate) fn project(&self, c: &CostArray, s: &Assignment) -> Result<ProjectionMatrix> {
        match self {
            MoveScope::Single(d) => project_single(c, s, *d),
            MoveScope::Subset(dims) => project_subset(c, s, dims),
        }
    }

    pub(crate) fn apply(&self, s: &Assignment, perm: &Permutation) -> Result<Assignment> {
        match self {
            MoveScope::Single(d) => apply_move_single(s, *d, perm),
            MoveScope::Subset(dims) => apply_move_subset(s, dims, perm),
        }
    }

    /// Tie key for VNS selection: excluding-dim-1 candidates sort before
    /// including ones, then lexicographically smaller subsets win.
    fn vns_key(&self) -> (bool, &[u16]) {
        match self {
            MoveScope::Single(_) => unreachable!("VNS plans contain subsets only"),
            MoveScope::Subset(dims) => (dims.includes_dim1(), dims.as_slice()),
        }
    }

    #[cfg(test)]
    pub(crate) fn label(&self) -> String {
        match self {
            MoveScope::Single(d) => format!("dim {d}"),
            MoveScope::Subset(dims) => format!("dims {dims}"),
        }
    }
}

/// The fixed, deterministic scan order of neighborhoods for `(D, mode)`.
pub(crate) struct MovePlan {
    mode: NeighborhoodMode,
    scopes: Vec<MoveScope>,
}

impl MovePlan {
    pub(crate) fn new(d: usize, mode: NeighborhoodMode) -> Result<Self> {
        if d < 3 {
            return Err(Error::Config(format!("D must be >= 3, got {d}")));
        }
        mode.validate(d)?;
        let mut scopes = Vec::new();
        match mode {
            NeighborhoodMode::VlsnAllDims => {
                scopes.extend((1..=d).map(MoveScope::Single));
            }
            NeighborhoodMode::VlsnNoDim1 => {
                scopes.extend((2..=d).map(MoveScope::Single));
            }
            NeighborhoodMode::VnsOrder(k) => push_order(&mut scopes, d, k)?,
            NeighborhoodMode::VnsAllOrders => {
                for k in 1..=d / 2 {
                    push_order(&mut scopes, d, k)?;
                }
            }
        }
        Ok(MovePlan { mode, scopes })
    }

    pub(crate) fn scopes(&self) -> &[MoveScope] {
        &self.scopes
    }

    pub(crate) fn mode(&self) -> NeighborhoodMode {
        self.mode
    }
}

/// Appends the order-`k` scopes in canonical scan order: size-k subsets of
/// `{2..D}` lexicographically, then `{1} ∪ T` for size-(k-1) subsets `T`.
fn push_order(scopes: &mut Vec<MoveScope>, d: usize, k: usize) -> Result<()> {
    for combo in combinations(2, d, k) {
        scopes.push(MoveScope::Subset(DimensionSubset::new(&combo, d)?));
    }
    for combo in combinations(2, d, k - 1) {
        let mut dims = vec![1];
        dims.extend(combo);
        scopes.push(MoveScope::Subset(DimensionSubset::new(&dims, d)?));
    }
    Ok(())
}

/// All size-`k` subsets of `{lo..=hi}` in lexicographic order (a single
/// empty subset when `k = 0`).
fn combinations(lo: usize, hi: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(lo: usize, hi: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for x in lo..=hi.saturating_sub(need - 1) {
            cur.push(x);
            rec(x + 1, hi, k, cur, out);
            cur.pop();
        }
    }
    if k == 0 {
        out.push(Vec::new());
    } else {
        rec(lo, hi, k, &mut cur, &mut out);
    }
    out
}

/// The steepest improving move at `s` (objective `y`), or `None` at a local
/// minimum. Returns the move and the number of LAP solves spent.
pub(crate) fn best_improving(
    c: &CostArray,
    s: &Assignment,
    y: i64,
    plan: &MovePlan,
    solver: &mut LapSolver,
) -> Result<(Option<ChosenMove>, u64)> {
    let mut solves = 0u64;
    let mut best: Option<(usize, i64, Permutation)> = None;
    for (idx, scope) in plan.scopes().iter().enumerate() {
        let sol = scope.project(c, s)?.solve(solver)?;
        solves += 1;
        if sol.value >= y {
            continue;
        }
        let better = match &best {
            None => true,
            Some((best_idx, best_value, _)) => {
                if plan.mode().is_vlsn() {
                    // Scan order is dimension order: strict improvement only.
                    sol.value < *best_value
                } else {
                    sol.value < *best_value
                        || (sol.value == *best_value
                            && scope.vns_key() < plan.scopes()[*best_idx].vns_key())
                }
            }
        };
        if better {
            best = Some((idx, sol.value, sol.perm));
        }
    }
    let chosen = match best {
        None => None,
        Some((idx, value, perm)) => {
            let next = plan.scopes()[idx].apply(s, &perm)?;
            Some(ChosenMove {
                value,
                scope_index: idx,
                next,
            })
        }
    };
    Ok((chosen, solves))
}

/// A selected improving move, already applied.
pub(crate) struct ChosenMove {
    pub value: i64,
    #[allow(dead_code)]
    pub scope_index: usize,
    pub next: Assignment,
}

/// Every improving candidate at `s` in scan order (duplicates possible when
/// two scopes reach the same solution; callers deduplicate). Returns the
/// candidates and the number of LAP solves spent.
pub(crate) fn improving_candidates(
    c: &CostArray,
    s: &Assignment,
    y: i64,
    plan: &MovePlan,
    solver: &mut LapSolver,
) -> Result<(Vec<(i64, Assignment)>, u64)> {
    let mut out = Vec::new();
    let mut solves = 0u64;
    for scope in plan.scopes() {
        let sol = scope.project(c, s)?.solve(solver)?;
        solves += 1;
        if sol.value < y {
            out.push((sol.value, scope.apply(s, &sol.perm)?));
        }
    }
    Ok((out, solves))
}
