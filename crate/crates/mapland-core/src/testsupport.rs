//! Test-only helpers for N = 2 instances with prescribed objectives.
//!
//! With N = 2 a solution is fully described by which of the dimension
//! `2..=D` columns are transpositions: bit `p - 2` of its *label*. The
//! instance built here places the entire objective of the labeled solution
//! on its row-0 index tuple (the row-1 tuple costs zero), so an arbitrary
//! fitness vector over the `2^(D-1)` labels can be realized exactly.

use crate::instance::CostArray;
use crate::perm::Permutation;
use crate::solution::Assignment;

/// Bit label of an N = 2 solution: bit `p - 2` set iff the dimension-`p`
/// column is the transposition.
pub(crate) fn n2_label(a: &Assignment) -> usize {
    (2..=a.d()).fold(0, |acc, p| acc | (((a.image(p, 0) == 1) as usize) << (p - 2)))
}

/// Inverse of [`n2_label`].
pub(crate) fn n2_assignment(d: usize, label: usize) -> Assignment {
    assert!(label < 1 << (d - 1), "label out of range for D={d}");
    let swap = Permutation::from_images(vec![1, 0]).unwrap();
    let cols: Vec<Permutation> = (2..=d)
        .map(|p| {
            if (label >> (p - 2)) & 1 == 1 {
                swap.clone()
            } else {
                Permutation::identity(2)
            }
        })
        .collect();
    Assignment::from_columns(&cols).unwrap()
}

/// A D-dimensional, N = 2 instance whose label-`L` solution has objective
/// exactly `fitness[L]`.
pub(crate) fn n2_fitness_instance(d: usize, fitness: &[i64]) -> CostArray {
    let half = 1usize << (d - 1);
    assert_eq!(fitness.len(), half, "need one fitness value per label");
    let mut costs = vec![0i64; 2 * half];
    for (label, &f) in fitness.iter().enumerate() {
        // Row-0 tuple of the labeled solution is (0, b_2, ..., b_D) with
        // b_p = bit (p - 2); flatten it with dimension 2 most significant.
        // Its row-1 tuple is the complement (1, 1-b_2, ...), left at zero.
        let mut row0 = 0usize;
        for p in 2..=d {
            row0 = row0 * 2 + ((label >> (p - 2)) & 1);
        }
        costs[row0] = f;
    }
    CostArray::new(d, 2, costs).unwrap()
}
