//! Feasible MAP solutions and their enumeration.
//!
//! A feasible solution selects `N` pairwise-disjoint index tuples. With the
//! first dimension fixed to the identity (row `i` always uses first index
//! `i`), a solution is exactly a choice of `D - 1` permutations — one per
//! dimension `2..=D` — so representation uniqueness holds by construction
//! and the solution space has `(N!)^(D-1)` elements.

use std::fmt;

use rand_core::RngCore;

use crate::perm::{factorial_checked, Permutation};
use crate::{Error, Result};

/// Default guard for exhaustive solution enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// A feasible solution: permutations for dimensions `2..=D`, stored as
/// 0-based image columns (`composed` first column is implicitly identity).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    n: u16,
    /// Column-major images: `cols[(d - 2) * n + i]` is the 0-based image of
    /// row `i` under the dimension-`d` permutation.
    cols: Vec<u16>,
}

impl Assignment {
    /// The all-identity solution for a `d`-dimensional instance.
    pub fn identity(d: usize, n: usize) -> Result<Self> {
        check_shape(d, n)?;
        let mut cols = Vec::with_capacity((d - 1) * n);
        for _ in 2..=d {
            cols.extend(0..n as u16);
        }
        Ok(Assignment { n: n as u16, cols })
    }

    /// Builds a solution from explicit columns for dimensions `2..=D`.
    pub fn from_columns(columns: &[Permutation]) -> Result<Self> {
        if columns.len() < 2 {
            return Err(Error::Shape(format!(
                "need at least 2 columns (D >= 3), got {}",
                columns.len()
            )));
        }
        let n = columns[0].n();
        check_shape(columns.len() + 1, n)?;
        if columns.iter().any(|p| p.n() != n) {
            return Err(Error::Shape("columns have mixed cardinalities".into()));
        }
        let mut cols = Vec::with_capacity(columns.len() * n);
        for p in columns {
            cols.extend_from_slice(p.images());
        }
        Ok(Assignment { n: n as u16, cols })
    }

    /// Internal constructor for already-validated column data.
    pub(crate) fn from_raw(n: u16, cols: Vec<u16>) -> Self {
        debug_assert!(cols.len() % (n as usize) == 0);
        Assignment { n, cols }
    }

    /// A uniformly random solution (independent column permutations).
    pub fn random<R: RngCore>(d: usize, n: usize, rng: &mut R) -> Result<Self> {
        check_shape(d, n)?;
        let mut cols = Vec::with_capacity((d - 1) * n);
        for _ in 2..=d {
            cols.extend_from_slice(Permutation::random(n, rng).images());
        }
        Ok(Assignment { n: n as u16, cols })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn d(&self) -> usize {
        self.cols.len() / self.n as usize + 1
    }

    /// Image column for dimension `d` (valid for `2 <= d <= D`).
    #[inline]
    pub fn column(&self, d: usize) -> &[u16] {
        let n = self.n as usize;
        debug_assert!((2..=self.d()).contains(&d));
        &self.cols[(d - 2) * n..(d - 1) * n]
    }

    /// 0-based image of row `i` in dimension `d` (`2 <= d <= D`).
    #[inline]
    pub fn image(&self, d: usize, i: usize) -> usize {
        self.cols[(d - 2) * self.n as usize + i] as usize
    }

    /// The dimension-`d` column as a [`Permutation`].
    pub fn column_perm(&self, d: usize) -> Permutation {
        Permutation::from_images(self.column(d).to_vec())
            .expect("stored columns are permutations by construction")
    }

    pub(crate) fn raw_cols(&self) -> &[u16] {
        &self.cols
    }

    /// Canonical text encoding: 1-based columns for dimensions `2..=D`,
    /// values comma-separated, columns joined by `|` (e.g. `"2,1|1,2"`).
    pub fn encode(&self) -> String {
        let n = self.n as usize;
        let mut out = String::with_capacity(self.cols.len() * 3);
        for (c, chunk) in self.cols.chunks(n).enumerate() {
            if c > 0 {
                out.push('|');
            }
            for (i, &x) in chunk.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(itoa(x as usize + 1).as_str());
            }
        }
        out
    }

    /// Parses the canonical encoding produced by [`encode`](Self::encode).
    pub fn parse(s: &str) -> Result<Self> {
        let columns: Vec<Permutation> = s
            .split('|')
            .map(Permutation::parse_one_based)
            .collect::<Result<_>>()?;
        Self::from_columns(&columns)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Assignment({})", self.encode())
    }
}

fn itoa(x: usize) -> String {
    x.to_string()
}

fn check_shape(d: usize, n: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::Shape(format!("D must be >= 3, got {d}")));
    }
    if n < 2 {
        return Err(Error::Shape(format!("N must be >= 2, got {n}")));
    }
    if n > u16::MAX as usize {
        return Err(Error::Shape(format!("N must fit in u16, got {n}")));
    }
    Ok(())
}

/// Number of feasible solutions, `(N!)^(D-1)`, or a range error when it
/// does not fit in `u64`.
pub fn count_solutions(d: usize, n: usize) -> Result<u64> {
    check_shape(d, n)?;
    let f = factorial_checked(n)
        .ok_or_else(|| Error::Range(format!("{n}! does not fit in u64")))?;
    let mut total: u64 = 1;
    for _ in 2..=d {
        total = total.checked_mul(f).ok_or_else(|| {
            Error::Range(format!("({n}!)^{} does not fit in u64", d - 1))
        })?;
    }
    Ok(total)
}

/// Enumerates all `(N!)^(D-1)` solutions in lexicographic order of the
/// column ranks `(rank(π_2), ..., rank(π_D))`, dimension 2 slowest.
///
/// Refuses (cap error) when the count exceeds `cap`, so callers cannot
/// accidentally start an enumeration that will never finish.
pub fn enumerate_solutions(d: usize, n: usize, cap: u64) -> Result<SolutionIter> {
    let total = count_solutions(d, n)?;
    if total > cap {
        return Err(Error::CapExceeded {
            what: "solution enumeration",
            required: total,
            cap,
        });
    }
    Ok(SolutionIter {
        d,
        n,
        total,
        next: 0,
    })
}

/// Iterator over all feasible solutions; see [`enumerate_solutions`].
#[derive(Debug)]
pub struct SolutionIter {
    d: usize,
    n: usize,
    total: u64,
    next: u64,
}

impl Iterator for SolutionIter {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.next >= self.total {
            return None;
        }
        let f = crate::perm::factorial(self.n);
        let mut k = self.next;
        self.next += 1;
        // Mixed-radix digits, dimension D fastest.
        let ncols = self.d - 1;
        let mut ranks = vec![0u64; ncols];
        for slot in (0..ncols).rev() {
            ranks[slot] = k % f;
            k /= f;
        }
        let mut cols = Vec::with_capacity(ncols * self.n);
        for &r in &ranks {
            let p = Permutation::from_lex_rank(self.n, r).expect("rank < n! by construction");
            cols.extend_from_slice(p.images());
        }
        Some(Assignment::from_raw(self.n as u16, cols))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for SolutionIter {}
