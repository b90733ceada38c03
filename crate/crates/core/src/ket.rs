//! Sparse complex vectors over one excitation sector.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::sector::SectorBasis;

/// Amplitudes below this modulus are dropped.
pub const PRUNE: f64 = 1e-15;

/// Sectors up to this size accumulate through a dense scratch vector.
const DENSE_ACCUMULATE: usize = 1 << 23;

/// A ket stored as index-sorted `(index, amplitude)` pairs.
///
/// Keeping the entries sorted makes every reduction (`dot`, `norm`) sum in a
/// fixed order, so results are bit-reproducible.
#[derive(Debug, Clone)]
pub struct SparseKet {
    sector: Arc<SectorBasis>,
    entries: Vec<(usize, C64)>,
}

impl PartialEq for SparseKet {
    fn eq(&self, other: &Self) -> bool {
        self.same_sector(other) && self.entries == other.entries
    }
}

impl SparseKet {
    pub fn zero(sector: Arc<SectorBasis>) -> Self {
        Self { sector, entries: Vec::new() }
    }

    pub fn basis_state(sector: Arc<SectorBasis>, index: usize) -> Self {
        assert!(index < sector.dim(), "basis index out of range");
        Self { sector, entries: vec![(index, C64::new(1.0, 0.0))] }
    }

    /// Builds a ket from pairs in any order; repeated indices are summed.
    pub fn from_pairs(sector: Arc<SectorBasis>, mut pairs: Vec<(usize, C64)>) -> Self {
        let dim = sector.dim();
        debug_assert!(pairs.iter().all(|(i, _)| *i < dim));
        let entries = if dim <= DENSE_ACCUMULATE && pairs.len() > dim / 8 {
            let mut dense = vec![C64::new(0.0, 0.0); dim];
            for (i, a) in pairs {
                dense[i] += a;
            }
            dense
                .into_iter()
                .enumerate()
                .filter(|(_, a)| a.norm() >= PRUNE)
                .collect()
        } else {
            pairs.sort_unstable_by_key(|p| p.0);
            let mut out: Vec<(usize, C64)> = Vec::with_capacity(pairs.len());
            for (i, a) in pairs {
                match out.last_mut() {
                    Some(last) if last.0 == i => last.1 += a,
                    _ => out.push((i, a)),
                }
            }
            out.retain(|(_, a)| a.norm() >= PRUNE);
            out
        };
        Self { sector, entries }
    }

    pub fn from_dense(sector: Arc<SectorBasis>, amps: &[C64]) -> Self {
        assert_eq!(amps.len(), sector.dim());
        let entries = amps
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, a)| a.norm() >= PRUNE)
            .collect();
        Self { sector, entries }
    }

    pub fn to_dense(&self) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.sector.dim()];
        for &(i, a) in &self.entries {
            out[i] = a;
        }
        out
    }

    pub fn sector(&self) -> &Arc<SectorBasis> {
        &self.sector
    }

    pub fn n_excited(&self) -> usize {
        self.sector.n_excited()
    }

    pub fn entries(&self) -> &[(usize, C64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn same_sector(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.sector, &other.sector) || *self.sector == *other.sector
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn dot(&self, other: &Self) -> C64 {
        assert!(self.same_sector(other), "inner product across sectors");
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = C64::new(0.0, 0.0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += a[i].1.conj() * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: C64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|&(i, a)| (i, a * c))
            .filter(|(_, a)| a.norm() >= PRUNE)
            .collect();
        Self { sector: self.sector.clone(), entries }
    }

    /// `Σ_k c_k |v_k⟩`; all terms must share a sector.
    pub fn linear_combination(sector: Arc<SectorBasis>, terms: &[(C64, &SparseKet)]) -> Self {
        let total: usize = terms.iter().map(|(_, v)| v.nnz()).sum();
        let mut pairs = Vec::with_capacity(total);
        for (c, v) in terms {
            assert!(*v.sector == *sector, "linear combination across sectors");
            pairs.extend(v.entries.iter().map(|&(i, a)| (i, a * c)));
        }
        Self::from_pairs(sector, pairs)
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: C64, other: &Self) -> Self {
        Self::linear_combination(
            self.sector.clone(),
            &[(C64::new(1.0, 0.0), self), (c, other)],
        )
    }

    /// Entry lookup by binary search.
    pub fn get(&self, index: usize) -> C64 {
        match self.entries.binary_search_by_key(&index, |p| p.0) {
            Ok(k) => self.entries[k].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }
}
