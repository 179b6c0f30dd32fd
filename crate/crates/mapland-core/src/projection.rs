//! Dimension-wise projections of a MAP onto N×N assignment matrices, and
//! application of the resulting moves.
//!
//! Fixing all of a solution except one dimension (or one subset of
//! dimensions moved in lockstep) reduces the choice of that part to a plain
//! linear assignment problem. The two families:
//!
//! - **single dimension** `d`: vary the dimension-`d` index of each row
//!   independently (`d >= 2`), or re-match rows to whole index tuples
//!   (`d = 1`);
//! - **dimension subset** `dims`: vary the positions in `dims` jointly, the
//!   block moving as one unit relative to the complement.
//!
//! The load-bearing contract, exercised heavily by tests: for every variant,
//! the projected matrix entry `(i, j)` equals the exact objective
//! contribution of row `i` under candidate `j`, so the optimal LAP value on
//! a projection equals the evaluated objective of the applied move, and the
//! current solution appears in the matrix as a feasible permutation (no
//! projected move can be worse than staying put).

use crate::instance::CostArray;
use crate::lap::{LapSolution, LapSolver};
use crate::perm::Permutation;
use crate::solution::Assignment;
use crate::{Error, Result};

/// A sorted set of dimensions `⊆ {1..D}` with `1 <= k < D`, the unit moved
/// jointly by a subset projection.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimensionSubset {
    dims: Vec<u16>,
    d: u16,
}

impl DimensionSubset {
    /// Builds a subset of the dimensions of a `D`-dimensional problem;
    /// duplicates, out-of-range dimensions, and k ∉ [1, D-1] are rejected.
    pub fn new(dims: &[usize], d: usize) -> Result<Self> {
        if d < 3 {
            return Err(Error::Config(format!("D must be >= 3, got {d}")));
        }
        if dims.is_empty() || dims.len() >= d {
            return Err(Error::Config(format!(
                "subset size must satisfy 1 <= k < D, got k={} for D={d}",
                dims.len()
            )));
        }
        let mut sorted: Vec<u16> = dims.iter().map(|&x| x as u16).collect();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Config(format!("duplicate dimension {}", w[0])));
            }
        }
        if dims.iter().any(|&x| x == 0 || x > d) {
            return Err(Error::Config(format!("dimensions must lie in 1..={d}")));
        }
        Ok(DimensionSubset {
            dims: sorted,
            d: d as u16,
        })
    }

    /// The singleton subset `{dim}`.
    pub fn single(dim: usize, d: usize) -> Result<Self> {
        Self::new(&[dim], d)
    }

    pub fn k(&self) -> usize {
        self.dims.len()
    }

    pub fn problem_d(&self) -> usize {
        self.d as usize
    }

    pub fn includes_dim1(&self) -> bool {
        self.dims[0] == 1
    }

    pub fn contains(&self, dim: usize) -> bool {
        self.dims.binary_search(&(dim as u16)).is_ok()
    }

    /// Sorted 1-based dimensions.
    pub fn dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.dims.iter().map(|&x| x as usize)
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.dims
    }
}

impl std::fmt::Display for DimensionSubset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (i, d) in self.dims.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("}")
    }
}

/// An N×N cost matrix produced by projecting a MAP at a solution, tagged
/// with the subset it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionMatrix {
    n: usize,
    entries: Vec<i64>,
    dims: DimensionSubset,
}

impl ProjectionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.entries
    }

    /// The dimension subset this matrix was projected over.
    pub fn dims(&self) -> &DimensionSubset {
        &self.dims
    }

    /// Solves this matrix as a LAP with the shared deterministic tie-break.
    pub fn solve(&self, solver: &mut LapSolver) -> Result<LapSolution> {
        solver.solve(self.n, &self.entries)
    }
}

/// Index weight of dimension `d` (1-based) in the flat cost layout.
#[inline]
fn weight(c: &CostArray, d: usize) -> usize {
    c.n().pow((c.d() - d) as u32)
}

fn check_projection_shapes(c: &CostArray, s: &Assignment) -> Result<()> {
    if s.d() != c.d() || s.n() != c.n() {
        return Err(Error::Shape(format!(
            "solution is {}x{}, instance is {}x{}",
            s.d(),
            s.n(),
            c.d(),
            c.n()
        )));
    }
    Ok(())
}

fn check_dim(c: &CostArray, d: usize) -> Result<()> {
    if d == 0 || d > c.d() {
        return Err(Error::Config(format!(
            "dimension {d} outside 1..={}",
            c.d()
        )));
    }
    Ok(())
}

fn check_subset(c: &CostArray, dims: &DimensionSubset) -> Result<()> {
    if dims.problem_d() != c.d() {
        return Err(Error::Shape(format!(
            "subset built for D={}, instance has D={}",
            dims.problem_d(),
            c.d()
        )));
    }
    Ok(())
}

/// Projects onto single dimension `d` at solution `s`.
///
/// For `d >= 2`, entry `(i, j)` re-reads the row-`i` tuple with its
/// dimension-`d` index replaced by `j`; the current column is the feasible
/// permutation `π_d`. For `d = 1`, entry `(i, j)` pairs first index `i`
/// with the entire remaining tuple of row `j`; the diagonal is current.
pub fn project_single(c: &CostArray, s: &Assignment, d: usize) -> Result<ProjectionMatrix> {
    check_projection_shapes(c, s)?;
    check_dim(c, d)?;
    let n = c.n();
    let costs = c.coefficients();
    let mut entries = vec![0i64; n * n];

    if d == 1 {
        let w1 = weight(c, 1);
        // Offset of the dimensions 2..=D of each row's tuple.
        let mut tail = vec![0usize; n];
        for (j, t) in tail.iter_mut().enumerate() {
            let mut off = 0usize;
            for p in 2..=c.d() {
                off += s.image(p, j) * weight(c, p);
            }
            *t = off;
        }
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = costs[i * w1 + tail[j]];
            }
        }
    } else {
        let wd = weight(c, d);
        for i in 0..n {
            let mut base = i * weight(c, 1);
            for p in 2..=c.d() {
                if p != d {
                    base += s.image(p, i) * weight(c, p);
                }
            }
            for j in 0..n {
                entries[i * n + j] = costs[base + j * wd];
            }
        }
    }
    Ok(ProjectionMatrix {
        n,
        entries,
        dims: DimensionSubset::single(d, c.d())?,
    })
}

/// Projects onto a dimension subset at solution `s`.
///
/// Without dimension 1, entry `(i, j)` keeps row `i`'s complement positions
/// and takes row `j`'s images on `dims`; the diagonal is current. With
/// dimension 1, the `dims∖{1}` block stays with row `i` and the complement
/// tuple comes from row `j`; the diagonal is again current.
pub fn project_subset(
    c: &CostArray,
    s: &Assignment,
    dims: &DimensionSubset,
) -> Result<ProjectionMatrix> {
    check_projection_shapes(c, s)?;
    check_subset(c, dims)?;
    let n = c.n();
    let costs = c.coefficients();
    let w1 = weight(c, 1);

    // Split each row's dims-2..D offsets into the subset part and the rest.
    let mut in_subset = vec![0usize; n];
    let mut outside = vec![0usize; n];
    for r in 0..n {
        for p in 2..=c.d() {
            let off = s.image(p, r) * weight(c, p);
            if dims.contains(p) {
                in_subset[r] += off;
            } else {
                outside[r] += off;
            }
        }
    }

    let mut entries = vec![0i64; n * n];
    if dims.includes_dim1() {
        // First index and the dims∖{1} block follow row i; complement
        // positions come from row j.
        for i in 0..n {
            let base = i * w1 + in_subset[i];
            for j in 0..n {
                entries[i * n + j] = costs[base + outside[j]];
            }
        }
    } else {
        for i in 0..n {
            let base = i * w1 + outside[i];
            for j in 0..n {
                entries[i * n + j] = costs[base + in_subset[j]];
            }
        }
    }
    Ok(ProjectionMatrix {
        n,
        entries,
        dims: dims.clone(),
    })
}

/// Applies the move selected from a single-dimension projection.
///
/// For `d >= 2` the dimension-`d` column becomes `perm`. For `d = 1`, row
/// `i` adopts the tuple of row `perm(i)`: every column `p >= 2` becomes
/// `π_p ∘ perm`, which keeps dimension 1 the identity by construction.
pub fn apply_move_single(s: &Assignment, d: usize, perm: &Permutation) -> Result<Assignment> {
    if perm.n() != s.n() {
        return Err(Error::Shape(format!(
            "permutation on {} elements, solution has N={}",
            perm.n(),
            s.n()
        )));
    }
    if d == 0 || d > s.d() {
        return Err(Error::Config(format!("dimension {d} outside 1..={}", s.d())));
    }
    let n = s.n();
    let mut cols = s.raw_cols().to_vec();
    if d == 1 {
        for p in 2..=s.d() {
            let start = (p - 2) * n;
            for i in 0..n {
                cols[start + i] = s.raw_cols()[start + perm.apply(i)];
            }
        }
    } else {
        let start = (d - 2) * n;
        cols[start..start + n].copy_from_slice(perm.images());
    }
    Ok(Assignment::from_raw(n as u16, cols))
}

/// Applies the move selected from a subset projection.
///
/// Without dimension 1, the subset columns are composed with `perm` (the
/// block re-attaches to the complement); with dimension 1, the complement
/// columns are composed instead, which moves the block relative to them
/// while dimension 1 stays the identity.
pub fn apply_move_subset(
    s: &Assignment,
    dims: &DimensionSubset,
    perm: &Permutation,
) -> Result<Assignment> {
    if perm.n() != s.n() {
        return Err(Error::Shape(format!(
            "permutation on {} elements, solution has N={}",
            perm.n(),
            s.n()
        )));
    }
    if dims.problem_d() != s.d() {
        return Err(Error::Shape(format!(
            "subset built for D={}, solution has D={}",
            dims.problem_d(),
            s.d()
        )));
    }
    let n = s.n();
    let compose_inside = !dims.includes_dim1();
    let mut cols = s.raw_cols().to_vec();
    for p in 2..=s.d() {
        if dims.contains(p) == compose_inside {
            let start = (p - 2) * n;
            for i in 0..n {
                cols[start + i] = s.raw_cols()[start + perm.apply(i)];
            }
        }
    }
    Ok(Assignment::from_raw(n as u16, cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate, InstanceSpec};
    use crate::lap::solve_lap;
    use crate::solution::enumerate_solutions;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn digits_3_2() -> CostArray {
        let mut costs = Vec::new();
        for i in 1..=2i64 {
            for j in 1..=2i64 {
                for k in 1..=2i64 {
                    costs.push(100 * i + 10 * j + k);
                }
            }
        }
        CostArray::new(3, 2, costs).unwrap()
    }

    #[test]
    fn single_projection_entries_read_off_the_tuples() {
        let c = digits_3_2();
        let s = Assignment::identity(3, 2).unwrap();
        // d=2 at identity: entry (i, j) = c[i, j, i].
        let m = project_single(&c, &s, 2).unwrap();
        assert_eq!(m.as_slice(), &[111, 121, 212, 222]);
        // d=3 at identity: entry (i, j) = c[i, i, j].
        let m = project_single(&c, &s, 3).unwrap();
        assert_eq!(m.as_slice(), &[111, 112, 221, 222]);
        // d=1 at identity: entry (i, j) = c[i, j, j].
        let m = project_single(&c, &s, 1).unwrap();
        assert_eq!(m.as_slice(), &[111, 122, 211, 222]);
    }

    #[test]
    fn subset_projection_entries_read_off_the_tuples() {
        // c_ijkl = 1000i + 100j + 10k + l, 1-based digits, D=4, N=2.
        let mut costs = Vec::new();
        for i in 1..=2i64 {
            for j in 1..=2i64 {
                for k in 1..=2i64 {
                    for l in 1..=2i64 {
                        costs.push(1000 * i + 100 * j + 10 * k + l);
                    }
                }
            }
        }
        let c = CostArray::new(4, 2, costs).unwrap();
        let s = Assignment::identity(4, 2).unwrap();
        // dims {2,3} at identity: entry (i, j) = c[i, j, j, i].
        let m = project_subset(&c, &s, &DimensionSubset::new(&[2, 3], 4).unwrap()).unwrap();
        assert_eq!(m.as_slice(), &[1111, 1221, 2112, 2222]);
        // dims {1,4}: first index and l follow i, the rest follows j:
        // entry (i, j) = c[i, j, j, i].
        let m = project_subset(&c, &s, &DimensionSubset::new(&[1, 4], 4).unwrap()).unwrap();
        assert_eq!(m.as_slice(), &[1111, 1221, 2112, 2222]);
        // dims {4}: entry (i, j) = c[i, i, i, j].
        let m = project_subset(&c, &s, &DimensionSubset::new(&[4], 4).unwrap()).unwrap();
        assert_eq!(m.as_slice(), &[1111, 1112, 2221, 2222]);
    }

    #[test]
    fn the_current_solution_is_feasible_in_every_projection() {
        let c = generate(&InstanceSpec::new(4, 5, 3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let s = Assignment::random(4, 5, &mut rng).unwrap();
            let y = c.evaluate(&s).unwrap();
            // d >= 2: the current column sums to the objective.
            for d in 2..=4 {
                let m = project_single(&c, &s, d).unwrap();
                let along: i64 = (0..5).map(|i| m.at(i, s.image(d, i))).sum();
                assert_eq!(along, y);
            }
            // d = 1 and subsets: the diagonal is current.
            let m = project_single(&c, &s, 1).unwrap();
            let diag: i64 = (0..5).map(|i| m.at(i, i)).sum();
            assert_eq!(diag, y);
            for dims in [&[2, 4][..], &[1, 3][..], &[1][..], &[2, 3, 4][..]] {
                let subset = DimensionSubset::new(dims, 4).unwrap();
                let m = project_subset(&c, &s, &subset).unwrap();
                let diag: i64 = (0..5).map(|i| m.at(i, i)).sum();
                assert_eq!(diag, y, "dims={subset}");
            }
        }
    }

    #[test]
    fn no_op_moves_change_nothing() {
        let s = Assignment::parse("2,1,3|3,1,2|1,3,2").unwrap();
        let id = Permutation::identity(3);
        // Dimension 1 re-matches rows, so the identity is the no-op there;
        // other single dimensions take the new column directly, so the
        // current column is the no-op.
        assert_eq!(apply_move_single(&s, 1, &id).unwrap(), s);
        for d in 2..=4 {
            assert_eq!(apply_move_single(&s, d, &s.column_perm(d)).unwrap(), s);
        }
        // Subset moves permute rows of the selected block: identity no-op.
        for dims in [&[2][..], &[1, 3][..], &[3, 4][..], &[1, 2, 4][..]] {
            let subset = DimensionSubset::new(dims, 4).unwrap();
            assert_eq!(apply_move_subset(&s, &subset, &id).unwrap(), s);
        }
    }

    #[test]
    fn two_element_moves_reach_the_documented_solutions() {
        let id = Assignment::identity(3, 2).unwrap();
        let swap = Permutation::from_images(vec![1, 0]).unwrap();
        // Swapping dimension 2 from the identity.
        assert_eq!(apply_move_single(&id, 2, &swap).unwrap().encode(), "2,1|1,2");
        // Swapping dimension 3.
        assert_eq!(apply_move_single(&id, 3, &swap).unwrap().encode(), "1,2|2,1");
        // Re-matching dimension 1 composes every other column.
        assert_eq!(apply_move_single(&id, 1, &swap).unwrap().encode(), "2,1|2,1");
    }

    #[test]
    fn matrix_entries_price_moves_exactly() {
        // entry (i, π(i)) summed equals the objective of the applied move,
        // for arbitrary permutations, across all projection variants.
        let c = generate(&InstanceSpec::new(5, 3, 11)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..8 {
            let s = Assignment::random(5, 3, &mut rng).unwrap();
            let pi = Permutation::random(3, &mut rng);
            for d in 1..=5 {
                let m = project_single(&c, &s, d).unwrap();
                let priced: i64 = (0..3).map(|i| m.at(i, pi.apply(i))).sum();
                let moved = apply_move_single(&s, d, &pi).unwrap();
                assert_eq!(priced, c.evaluate(&moved).unwrap(), "d={d}");
            }
            for dims in [&[2][..], &[1][..], &[2, 4], &[1, 3], &[3, 4, 5], &[1, 2, 5]] {
                let subset = DimensionSubset::new(dims, 5).unwrap();
                let m = project_subset(&c, &s, &subset).unwrap();
                let priced: i64 = (0..3).map(|i| m.at(i, pi.apply(i))).sum();
                let moved = apply_move_subset(&s, &subset, &pi).unwrap();
                assert_eq!(priced, c.evaluate(&moved).unwrap(), "dims={subset}");
            }
        }
    }

    #[test]
    fn lap_optimum_on_projection_equals_applied_move_objective() {
        let c = generate(&InstanceSpec::new(4, 4, 21)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..10 {
            let s = Assignment::random(4, 4, &mut rng).unwrap();
            let y = c.evaluate(&s).unwrap();
            for d in 1..=4 {
                let m = project_single(&c, &s, d).unwrap();
                let sol = solve_lap(m.n(), m.as_slice()).unwrap();
                let moved = apply_move_single(&s, d, &sol.perm).unwrap();
                assert_eq!(sol.value, c.evaluate(&moved).unwrap());
                assert!(sol.value <= y, "projection optimum can never be worse");
            }
            for dims in [&[3][..], &[1][..], &[2, 3], &[1, 4], &[2, 3, 4], &[1, 2, 3]] {
                let subset = DimensionSubset::new(dims, 4).unwrap();
                let m = project_subset(&c, &s, &subset).unwrap();
                let sol = solve_lap(m.n(), m.as_slice()).unwrap();
                let moved = apply_move_subset(&s, &subset, &sol.perm).unwrap();
                assert_eq!(sol.value, c.evaluate(&moved).unwrap());
                assert!(sol.value <= y);
            }
        }
    }

    #[test]
    fn singleton_subsets_span_the_same_neighborhood_as_single_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let s = Assignment::random(4, 3, &mut rng).unwrap();
        for d in 2..=4 {
            let subset = DimensionSubset::single(d, 4).unwrap();
            let mut via_single: Vec<Assignment> = Vec::new();
            let mut via_subset: Vec<Assignment> = Vec::new();
            for r in 0..6 {
                let pi = Permutation::from_lex_rank(3, r).unwrap();
                via_single.push(apply_move_single(&s, d, &pi).unwrap());
                via_subset.push(apply_move_subset(&s, &subset, &pi).unwrap());
            }
            via_single.sort();
            via_subset.sort();
            assert_eq!(via_single, via_subset, "d={d}");
        }
    }

    #[test]
    fn moves_preserve_feasibility_across_the_whole_tiny_space() {
        let c = generate(&InstanceSpec::new(3, 3, 41)).unwrap();
        let swap = Permutation::from_one_based(&[2, 1, 3]).unwrap();
        for s in enumerate_solutions(3, 3, 100).unwrap() {
            for d in 1..=3 {
                let moved = apply_move_single(&s, d, &swap).unwrap();
                assert!(c.evaluate(&moved).is_ok());
            }
        }
    }

    #[test]
    fn subset_validation_rejects_bad_inputs() {
        assert!(DimensionSubset::new(&[], 4).is_err());
        assert!(DimensionSubset::new(&[1, 2, 3, 4], 4).is_err());
        assert!(DimensionSubset::new(&[2, 2], 4).is_err());
        assert!(DimensionSubset::new(&[5], 4).is_err());
        assert!(DimensionSubset::new(&[0], 4).is_err());
        // Unsorted input is accepted and normalized.
        let s = DimensionSubset::new(&[4, 2], 4).unwrap();
        assert_eq!(s.as_slice(), &[2, 4]);
        assert!(!s.includes_dim1());
        assert!(DimensionSubset::new(&[3, 1], 4).unwrap().includes_dim1());
    }

    #[test]
    fn dimension_bounds_are_enforced() {
        let c = digits_3_2();
        let s = Assignment::identity(3, 2).unwrap();
        assert!(project_single(&c, &s, 0).is_err());
        assert!(project_single(&c, &s, 4).is_err());
        let wrong = Assignment::identity(3, 3).unwrap();
        assert!(project_single(&c, &wrong, 2).is_err());
        let foreign = DimensionSubset::new(&[2], 4).unwrap();
        assert!(project_subset(&c, &s, &foreign).is_err());
        let short = Permutation::identity(3);
        assert!(apply_move_single(&s, 2, &short).is_err());
    }
}
