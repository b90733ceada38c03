//! Fixed-excitation sectors of N two-level systems.
//!
//! The `C(N, m)` configurations with exactly `m` excited particles are indexed
//! by their colex rank: a subset `c_1 < … < c_m` (0-based) maps to
//! `Σ_k C(c_k, k)`. Ranking and unranking are `O(m)` and `O(m + N)` without any
//! lookup beyond a small Pascal table.

use crate::error::{invalid, Error, Result};

/// Largest sector this crate will index. Kets over bigger sectors would not fit
/// in memory anyway.
pub const MAX_SECTOR_DIM: u64 = 1 << 40;

/// `C(n, k)`, or `None` on `u64` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Number of configurations of `n` particles with `m` excitations.
pub fn sector_dim(n: usize, m: usize) -> Result<u64> {
    if m > n {
        return invalid(format!("excitation number {m} exceeds particle count {n}"));
    }
    binomial(n as u64, m as u64)
        .ok_or_else(|| Error::Guard(format!("sector C({n},{m}) overflows 64 bits")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    n: usize,
    m: usize,
    dim: usize,
    // pascal[c * (m + 1) + k] = C(c, k), c ≤ n, k ≤ m
    pascal: Vec<u64>,
}

impl SectorBasis {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let dim = sector_dim(n, m)?;
        if dim > MAX_SECTOR_DIM {
            return Err(Error::Guard(format!(
                "sector C({n},{m}) = {dim} exceeds the indexable limit {MAX_SECTOR_DIM}"
            )));
        }
        let w = m + 1;
        let mut pascal = vec![0u64; (n + 1) * w];
        for c in 0..=n {
            pascal[c * w] = 1;
            for k in 1..=m.min(c) {
                let above = pascal[(c - 1) * w + k - 1];
                let left = if k < c { pascal[(c - 1) * w + k] } else { 0 };
                pascal[c * w + k] = above.saturating_add(left);
            }
        }
        Ok(Self { n, m, dim: dim as usize, pascal })
    }

    pub fn n_particles(&self) -> usize {
        self.n
    }

    pub fn n_excited(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `C(c, k)` for `c ≤ n`, `k ≤ m`, read from the table.
    #[inline]
    pub fn c(&self, c: usize, k: usize) -> u64 {
        self.pascal[c * (self.m + 1) + k]
    }

    /// Rank of a strictly increasing subset of `0..n` with `m` elements.
    ///
    /// The caller guarantees the ordering; it is checked only in debug builds.
    #[inline]
    pub fn rank(&self, subset: &[usize]) -> usize {
        debug_assert_eq!(subset.len(), self.m);
        debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(subset.last().map_or(true, |&c| c < self.n));
        subset
            .iter()
            .enumerate()
            .map(|(k, &c)| self.c(c, k + 1) as usize)
            .sum()
    }

    /// Writes the subset with the given rank into `out` (length `m`).
    pub fn unrank_into(&self, mut index: usize, out: &mut [usize]) {
        debug_assert!(index < self.dim);
        debug_assert_eq!(out.len(), self.m);
        let mut c = self.n;
        for k in (1..=self.m).rev() {
            // largest c with C(c, k) ≤ index
            c -= 1;
            while self.c(c, k) as usize > index {
                c -= 1;
            }
            out[k - 1] = c;
            index -= self.c(c, k) as usize;
        }
    }

    pub fn unrank(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.m];
        self.unrank_into(index, &mut out);
        out
    }

    /// Bitmask of the excited particles (`n ≤ 64`).
    pub fn unrank_mask(&self, index: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.unrank(index).into_iter().fold(0, |acc, c| acc | (1u64 << c))
    }

    pub fn rank_mask(&self, mask: u64) -> usize {
        debug_assert_eq!(mask.count_ones() as usize, self.m);
        let mut rank = 0;
        let mut rest = mask;
        let mut k = 1;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rank += self.c(c, k) as usize;
            k += 1;
            rest &= rest - 1;
        }
        rank
    }
}
