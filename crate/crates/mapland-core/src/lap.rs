//! Exact integer linear assignment (LAP) solver.
//!
//! # Algorithm
//!
//! Shortest-augmenting-path Hungarian method with dual potentials `u`, `v`
//! (the classic O(N^3) formulation over dense i64 matrices). All arithmetic
//! is exact, so equal-cost assignments compare equal instead of differing in
//! floating-point noise.
//!
//! On top of the optimal duals, the solver extracts the *lexicographically
//! smallest* optimal permutation: by complementary slackness the optimal
//! assignments are exactly the perfect matchings of the tight-edge graph
//! (`cost[i][j] == u[i] + v[j]`), so rows are fixed greedily to their
//! smallest feasible column, feasibility being checked with an augmenting
//! path. This makes every downstream search fully deterministic: identical
//! matrices always yield the identical permutation.

use crate::perm::Permutation;
use crate::{Error, Result};

/// Guard so dual updates and row sums cannot overflow.
const MAX_ABS_COST: i64 = i64::MAX / 8;
const INF: i64 = i64::MAX / 4;
const UNMATCHED: usize = usize::MAX;

/// An optimal assignment: `perm.apply(i)` is the column of row `i`, and
/// `value` is the exact optimal total cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LapSolution {
    pub perm: Permutation,
    pub value: i64,
}

/// Reusable solver holding scratch buffers; keep one per worker thread and
/// call [`solve`](LapSolver::solve) repeatedly to avoid reallocation.
#[derive(Default)]
pub struct LapSolver {
    // Shortest-augmenting-path state (1-based with virtual column 0).
    u: Vec<i64>,
    v: Vec<i64>,
    p: Vec<usize>,
    way: Vec<usize>,
    minv: Vec<i64>,
    used: Vec<bool>,
    // Lexicographic extraction state (0-based).
    row_match: Vec<usize>,
    col_match: Vec<usize>,
    col_fixed: Vec<bool>,
    visited: Vec<bool>,
}

impl LapSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Solves the N×N LAP given row-major costs; returns the optimal value
    /// together with the lexicographically smallest optimal permutation.
    pub fn solve(&mut self, n: usize, cost: &[i64]) -> Result<LapSolution> {
        if n == 0 {
            return Err(Error::Shape("LAP requires N >= 1".into()));
        }
        if cost.len() != n * n {
            return Err(Error::Shape(format!(
                "cost matrix has {} entries, expected {}x{} = {}",
                cost.len(),
                n,
                n,
                n * n
            )));
        }
        if cost.iter().any(|&c| c.abs() > MAX_ABS_COST) {
            return Err(Error::Range(
                "LAP cost magnitude too large for exact arithmetic".into(),
            ));
        }

        self.assign_with_duals(n, cost);
        self.lexicographic_extraction(n, cost);

        let mut images = vec![0u16; n];
        let mut value: i64 = 0;
        for i in 0..n {
            let j = self.row_match[i];
            images[i] = j as u16;
            value += cost[i * n + j];
        }
        Ok(LapSolution {
            perm: Permutation::from_images(images).expect("matching is a bijection"),
            value,
        })
    }

    /// Shortest augmenting path over rows, maintaining feasible potentials.
    /// Afterwards `p[j]` (1-based) holds the row matched to column `j` and
    /// `u`/`v` are optimal duals with `cost[i][j] >= u[i] + v[j]`.
    fn assign_with_duals(&mut self, n: usize, cost: &[i64]) {
        let a = |i: usize, j: usize| cost[(i - 1) * n + (j - 1)];
        self.u.clear();
        self.u.resize(n + 1, 0);
        self.v.clear();
        self.v.resize(n + 1, 0);
        self.p.clear();
        self.p.resize(n + 1, 0);
        self.way.clear();
        self.way.resize(n + 1, 0);

        for i in 1..=n {
            self.p[0] = i;
            let mut j0 = 0usize;
            self.minv.clear();
            self.minv.resize(n + 1, INF);
            self.used.clear();
            self.used.resize(n + 1, false);
            loop {
                self.used[j0] = true;
                let i0 = self.p[j0];
                let mut delta = INF;
                let mut j1 = 0usize;
                for j in 1..=n {
                    if self.used[j] {
                        continue;
                    }
                    let cur = a(i0, j) - self.u[i0] - self.v[j];
                    if cur < self.minv[j] {
                        self.minv[j] = cur;
                        self.way[j] = j0;
                    }
                    if self.minv[j] < delta {
                        delta = self.minv[j];
                        j1 = j;
                    }
                }
                for j in 0..=n {
                    if self.used[j] {
                        self.u[self.p[j]] += delta;
                        self.v[j] -= delta;
                    } else {
                        self.minv[j] -= delta;
                    }
                }
                j0 = j1;
                if self.p[j0] == 0 {
                    break;
                }
            }
            // Unroll the alternating path.
            loop {
                let j1 = self.way[j0];
                self.p[j0] = self.p[j1];
                j0 = j1;
                if j0 == 0 {
                    break;
                }
            }
        }

        #[cfg(debug_assertions)]
        for i in 1..=n {
            for j in 1..=n {
                debug_assert!(
                    a(i, j) - self.u[i] - self.v[j] >= 0,
                    "dual feasibility violated at ({i},{j})"
                );
            }
        }
    }

    /// True when `cost[i][j]` is tight for the final duals (0-based).
    #[inline]
    fn tight(&self, n: usize, cost: &[i64], i: usize, j: usize) -> bool {
        cost[i * n + j] == self.u[i + 1] + self.v[j + 1]
    }

    /// Re-matches rows in index order to their smallest tight column that
    /// still leaves the remaining rows perfectly matchable, starting from
    /// the matching found by [`assign_with_duals`]. Every perfect matching
    /// of tight edges is optimal, so the result is the lexicographically
    /// smallest optimal permutation.
    fn lexicographic_extraction(&mut self, n: usize, cost: &[i64]) {
        self.row_match.clear();
        self.row_match.resize(n, UNMATCHED);
        self.col_match.clear();
        self.col_match.resize(n, UNMATCHED);
        self.col_fixed.clear();
        self.col_fixed.resize(n, false);
        for j in 1..=n {
            let i = self.p[j];
            debug_assert!(i >= 1);
            self.row_match[i - 1] = j - 1;
            self.col_match[j - 1] = i - 1;
        }

        for i in 0..n {
            let current = self.row_match[i];
            debug_assert!(self.tight(n, cost, i, current));
            for j in 0..n {
                if self.col_fixed[j] || !self.tight(n, cost, i, j) {
                    continue;
                }
                if j == current {
                    break; // keeping the existing column is already smallest
                }
                // Tentatively steal column j from its row and ask the
                // displaced row to find a replacement among unfixed columns;
                // column `current` becomes the single free column.
                let displaced = self.col_match[j];
                debug_assert!(displaced > i, "earlier rows are fixed");
                self.row_match[i] = j;
                self.col_match[j] = i;
                self.col_match[current] = UNMATCHED;
                self.row_match[displaced] = UNMATCHED;
                self.visited.clear();
                self.visited.resize(n, false);
                self.visited[j] = true;
                if self.augment(n, cost, displaced) {
                    break;
                }
                // Infeasible: restore and try the next candidate column.
                self.row_match[displaced] = j;
                self.col_match[j] = displaced;
                self.col_match[current] = i;
                self.row_match[i] = current;
            }
            self.col_fixed[self.row_match[i]] = true;
        }
    }

    /// Kuhn augmentation on tight edges restricted to unfixed columns.
    fn augment(&mut self, n: usize, cost: &[i64], row: usize) -> bool {
        for j in 0..n {
            if self.visited[j] || self.col_fixed[j] || !self.tight(n, cost, row, j) {
                continue;
            }
            self.visited[j] = true;
            let owner = self.col_match[j];
            if owner == UNMATCHED || self.augment(n, cost, owner) {
                self.col_match[j] = row;
                self.row_match[row] = j;
                return true;
            }
        }
        false
    }
}

/// One-shot convenience wrapper around [`LapSolver::solve`].
pub fn solve_lap(n: usize, cost: &[i64]) -> Result<LapSolution> {
    LapSolver::new().solve(n, cost)
}
