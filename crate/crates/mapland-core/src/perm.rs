//! Permutations of `{1..N}`, stored 0-based for direct indexing.
//!
//! Ranking/unranking uses the Lehmer code, so rank order coincides with
//! lexicographic order on the image sequence; this is what gives solution
//! enumeration its documented deterministic order.

use std::fmt;

use rand_core::RngCore;

use crate::{Error, Result};

/// A permutation of `{0..n-1}`; `images[i]` is the image of `i`.
///
/// Displayed and parsed 1-based (`"2,1"` is the transposition on N = 2) to
/// match the usual matrix notation for assignment solutions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    /// The identity permutation on `n` elements.
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u16).collect(),
        }
    }

    /// Builds a permutation from 0-based images, rejecting non-bijections.
    pub fn from_images(images: Vec<u16>) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > u16::MAX as usize {
            return Err(Error::NotAPermutation(format!("bad length {n}")));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if (x as usize) >= n || seen[x as usize] {
                return Err(Error::NotAPermutation(format!(
                    "images are not a bijection on 0..{n}"
                )));
            }
            seen[x as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based values (`[2, 1]` on N = 2).
    pub fn from_one_based(values: &[usize]) -> Result<Self> {
        let images: Vec<u16> = values
            .iter()
            .map(|&v| {
                if v == 0 || v > values.len() {
                    Err(Error::NotAPermutation(format!(
                        "value {v} outside 1..={}",
                        values.len()
                    )))
                } else {
                    Ok((v - 1) as u16)
                }
            })
            .collect::<Result<_>>()?;
        Self::from_images(images)
    }

    /// Parses a 1-based comma-separated image list, e.g. `"2,1,3"`.
    pub fn parse_one_based(s: &str) -> Result<Self> {
        let values: Vec<usize> = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::NotAPermutation(format!("bad token {tok:?} in {s:?}")))
            })
            .collect::<Result<_>>()?;
        Self::from_one_based(&values)
    }

    /// The cyclic shift `i -> (i + t) mod n`.
    pub fn cyclic_shift(n: usize, t: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| ((i + t) % n) as u16).collect(),
        }
    }

    /// A uniformly random permutation (Fisher–Yates with an exact bounded
    /// sampler, so the stream depends only on the RNG, not on library
    /// internals).
    pub fn random<R: RngCore>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<u16> = (0..n as u16).collect();
        for i in (1..n).rev() {
            let j = gen_u64_below(rng, (i + 1) as u64) as usize;
            images.swap(i, j);
        }
        Permutation { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of 0-based `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    #[inline]
    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Function composition `self ∘ inner`: the result maps `i` to
    /// `self(inner(i))` (i.e. `inner` is applied first).
    pub fn compose(&self, inner: &Permutation) -> Permutation {
        debug_assert_eq!(self.n(), inner.n());
        Permutation {
            images: inner.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    /// Lexicographic rank in `0..n!` via the Lehmer code.
    pub fn lex_rank(&self) -> u64 {
        let n = self.n();
        let mut rank: u64 = 0;
        for i in 0..n {
            let smaller_right = self.images[i + 1..]
                .iter()
                .filter(|&&x| x < self.images[i])
                .count() as u64;
            // rank = sum of lehmer[i] * (n - 1 - i)!
            rank += smaller_right * factorial(n - 1 - i);
        }
        rank
    }

    /// Inverse of [`lex_rank`](Self::lex_rank); `rank` must be below `n!`.
    pub fn from_lex_rank(n: usize, rank: u64) -> Result<Self> {
        let total = factorial_checked(n)
            .ok_or_else(|| Error::Range(format!("{n}! does not fit in u64")))?;
        if rank >= total {
            return Err(Error::Range(format!("rank {rank} >= {n}!")));
        }
        let mut pool: Vec<u16> = (0..n as u16).collect();
        let mut images = Vec::with_capacity(n);
        let mut r = rank;
        for i in 0..n {
            let f = factorial(n - 1 - i);
            let idx = (r / f) as usize;
            r %= f;
            images.push(pool.remove(idx));
        }
        Ok(Permutation { images })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &x) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", x as usize + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// `n!` for small `n`; panics on overflow (callers guard with
/// [`factorial_checked`] when `n` is not already bounded).
pub(crate) fn factorial(n: usize) -> u64 {
    factorial_checked(n).expect("factorial overflow")
}

/// `n!` as `u64`, or `None` on overflow (`n > 20`).
pub(crate) fn factorial_checked(n: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for k in 2..=n as u64 {
        acc = acc.checked_mul(k)?;
    }
    Some(acc)
}

/// Uniform draw from `0..bound` by rejection on `next_u64`, exact for every
/// `bound >= 1`. Keeps generated artifacts stable across dependency upgrades.
pub(crate) fn gen_u64_below<R: RngCore>(rng: &mut R, bound: u64) -> u64 {
    debug_assert!(bound >= 1);
    // Largest multiple of `bound` representable in u64 arithmetic below.
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % bound;
        }
    }
}
