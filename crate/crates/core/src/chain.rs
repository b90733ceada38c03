//! Collective chain states.
//!
//! Starting from a seed ket, the collective raising operator `J⁺ = Σ g_i σ_i⁺`
//! and its adjoint are applied alternately and every image is Gram–Schmidt
//! orthogonalized against the states already kept in its excitation column.
//! New directions are appended as deeper rows (`|n̄⟩`, `|n̄_p⟩`, `|n̄_pp⟩`, …);
//! truncating the rows gives the effective Hilbert space.
//!
//! Generation is breadth-first. Row 1 is the raising ladder from the seed up to
//! the last column. After that each pass visits the columns left to right and
//! lets every column gain at most one state, taken from the first unused
//! candidate that is not linearly dependent: raised images of the column to the
//! left, then lowered images of the column to the right, newest first. Passes
//! repeat until nothing changes.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::ket::SparseKet;
use crate::linalg::CMatrix;
use crate::profile::CouplingProfile;
use crate::sector::SectorBasis;

/// Relative residual below which a candidate counts as linearly dependent.
pub const EPS_DEP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Inhomogeneous Tavis–Cummings: atoms coupled to a bosonic mode.
    Itc,
    /// Electron spin coupled to a nuclear spin bath by the contact hyperfine
    /// interaction.
    CentralSpin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChainLabel {
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscardReason {
    /// The residual vanished to within [`EPS_DEP`].
    Dependent,
    /// A genuinely new direction that did not fit under `max_row`.
    Truncated,
}

/// A candidate residual that did not enter the basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    /// Where the state would have gone.
    pub label: ChainLabel,
    pub norm: f64,
    /// `norm` divided by the norm of the candidate before projection.
    pub relative: f64,
    pub reason: DiscardReason,
}

/// Outcome of projecting a candidate off an orthonormal set.
#[derive(Debug, Clone)]
pub struct Orthogonalized {
    /// Normalized residual, or the raw (tiny) remainder when dependent.
    pub residual: SparseKet,
    pub overlaps: Vec<C64>,
    pub residual_norm: f64,
    pub candidate_norm: f64,
    pub dependent: bool,
}

/// Classical Gram–Schmidt applied twice.
pub fn orthogonalize(candidate: &SparseKet, basis: &[SparseKet]) -> Orthogonalized {
    let candidate_norm = candidate.norm();
    let mut overlaps = vec![C64::new(0.0, 0.0); basis.len()];
    let mut v = candidate.clone();
    for _ in 0..2 {
        if basis.is_empty() {
            break;
        }
        let proj: Vec<C64> = basis.iter().map(|b| b.dot(&v)).collect();
        let mut terms: Vec<(C64, &SparseKet)> = vec![(C64::new(1.0, 0.0), &v)];
        terms.extend(proj.iter().zip(basis).map(|(c, b)| (-c, b)));
        let next = SparseKet::linear_combination(v.sector().clone(), &terms);
        for (o, p) in overlaps.iter_mut().zip(&proj) {
            *o += p;
        }
        v = next;
    }
    let residual_norm = v.norm();
    let dependent = candidate_norm == 0.0 || residual_norm <= EPS_DEP * candidate_norm;
    let residual = if dependent { v } else { v.scale(C64::new(1.0 / residual_norm, 0.0)) };
    Orthogonalized { residual, overlaps, residual_norm, candidate_norm, dependent }
}

fn check_profile(profile: &CouplingProfile, ket: &SparseKet) -> Result<()> {
    if profile.len() != ket.sector().n_particles() {
        return invalid(format!(
            "profile has {} couplings but the ket lives on {} particles",
            profile.len(),
            ket.sector().n_particles()
        ));
    }
    Ok(())
}

/// `Σ_i g_i σ_i⁺ |ket⟩` into an already built target sector.
pub(crate) fn raise_to(g: &[f64], ket: &SparseKet, target: &Arc<SectorBasis>) -> SparseKet {
    let src = ket.sector();
    let m = src.n_excited();
    let n = src.n_particles();
    debug_assert_eq!(target.n_excited(), m + 1);
    let mut s = vec![0usize; m];
    // prefix[p] = Σ_{k<p} C(s_k, k+1); suffix[p] = Σ_{k≥p} C(s_k, k+2)
    let mut prefix = vec![0usize; m + 1];
    let mut suffix = vec![0usize; m + 1];
    let mut pairs = Vec::with_capacity(ket.nnz() * (n - m));
    for &(idx, amp) in ket.entries() {
        src.unrank_into(idx, &mut s);
        for k in 0..m {
            prefix[k + 1] = prefix[k] + target.c(s[k], k + 1) as usize;
        }
        suffix[m] = 0;
        for k in (0..m).rev() {
            suffix[k] = suffix[k + 1] + target.c(s[k], k + 2) as usize;
        }
        let mut p = 0;
        for i in 0..n {
            if p < m && s[p] == i {
                p += 1;
                continue;
            }
            let rank = prefix[p] + target.c(i, p + 1) as usize + suffix[p];
            pairs.push((rank, amp * g[i]));
        }
    }
    SparseKet::from_pairs(target.clone(), pairs)
}

/// `Σ_i g_i σ_i⁻ |ket⟩` into an already built target sector.
pub(crate) fn lower_to(g: &[f64], ket: &SparseKet, target: &Arc<SectorBasis>) -> SparseKet {
    let src = ket.sector();
    let m = src.n_excited();
    debug_assert!(m >= 1 && target.n_excited() == m - 1);
    let mut s = vec![0usize; m];
    // prefix[p] = Σ_{k<p} C(s_k, k+1); suffix[p] = Σ_{k>p} C(s_k, k)
    let mut prefix = vec![0usize; m + 1];
    let mut suffix = vec![0usize; m + 1];
    let mut pairs = Vec::with_capacity(ket.nnz() * m);
    for &(idx, amp) in ket.entries() {
        src.unrank_into(idx, &mut s);
        for k in 0..m {
            prefix[k + 1] = prefix[k] + if k + 1 < m { target.c(s[k], k + 1) as usize } else { 0 };
        }
        suffix[m - 1] = 0;
        for k in (0..m - 1).rev() {
            suffix[k] = suffix[k + 1] + target.c(s[k + 1], k + 1) as usize;
        }
        for p in 0..m {
            pairs.push((prefix[p] + suffix[p], amp * g[s[p]]));
        }
    }
    SparseKet::from_pairs(target.clone(), pairs)
}

/// Applies `J⁺ = Σ g_i σ_i⁺`; the result is not normalized.
pub fn collective_raise(profile: &CouplingProfile, ket: &SparseKet) -> Result<SparseKet> {
    check_profile(profile, ket)?;
    let src = ket.sector();
    if src.n_excited() == src.n_particles() {
        return invalid("cannot raise a fully excited sector");
    }
    let target = Arc::new(SectorBasis::new(src.n_particles(), src.n_excited() + 1)?);
    Ok(raise_to(profile.values(), ket, &target))
}

/// Applies `J⁻ = Σ g_i σ_i⁻`, the adjoint of [`collective_raise`].
pub fn collective_lower(profile: &CouplingProfile, ket: &SparseKet) -> Result<SparseKet> {
    check_profile(profile, ket)?;
    let src = ket.sector();
    if src.n_excited() == 0 {
        return invalid("cannot lower the ground sector");
    }
    let target = Arc::new(SectorBasis::new(src.n_particles(), src.n_excited() - 1)?);
    Ok(lower_to(profile.values(), ket, &target))
}

/// Orthonormal chain states over a window of excitation columns.
#[derive(Debug, Clone)]
pub struct EffectiveBasis {
    model: Model,
    profile: CouplingProfile,
    min_col: usize,
    max_col: usize,
    max_row: usize,
    seed: usize,
    labels: Vec<ChainLabel>,
    vectors: Vec<SparseKet>,
    couplings: CMatrix,
    residual_log: Vec<ResidualRecord>,
}

impl EffectiveBasis {
    pub fn model(&self) -> Model {
        self.model
    }

    pub fn profile(&self) -> &CouplingProfile {
        &self.profile
    }

    pub fn n_particles(&self) -> usize {
        self.profile.len()
    }

    pub fn min_col(&self) -> usize {
        self.min_col
    }

    pub fn max_col(&self) -> usize {
        self.max_col
    }

    pub fn max_row(&self) -> usize {
        self.max_row
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels sorted by column, then row.
    pub fn labels(&self) -> &[ChainLabel] {
        &self.labels
    }

    pub fn vectors(&self) -> &[SparseKet] {
        &self.vectors
    }

    /// Index of the seed state (row 1 of its column).
    pub fn seed_index(&self) -> usize {
        self.seed
    }

    pub fn index_of(&self, label: ChainLabel) -> Option<usize> {
        self.labels.binary_search_by_key(&(label.col, label.row), |l| (l.col, l.row)).ok()
    }

    /// `couplings[(w, v)] = ⟨w|J⁺|v⟩`, nonzero only when `col(w) = col(v) + 1`.
    pub fn couplings(&self) -> &CMatrix {
        &self.couplings
    }

    pub fn residual_log(&self) -> &[ResidualRecord] {
        &self.residual_log
    }

    pub fn rows_in_col(&self, col: usize) -> usize {
        self.labels.iter().filter(|l| l.col == col).count()
    }

    /// Largest `|⟨v_i|v_j⟩ − δ_ij|` over pairs in the same column.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            for j in i..self.len() {
                if self.labels[i].col != self.labels[j].col {
                    continue;
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.vectors[i].dot(&self.vectors[j]) - target).norm());
            }
        }
        worst
    }

    /// `Σ_k amps[k] |v_k⟩` over the states of one column; `amps` runs over
    /// the whole basis and entries from other columns are ignored.
    pub fn expand_column(&self, col: usize, amps: &[C64]) -> Option<SparseKet> {
        assert_eq!(amps.len(), self.len());
        let terms: Vec<(C64, &SparseKet)> = self
            .labels
            .iter()
            .zip(&self.vectors)
            .zip(amps)
            .filter(|((l, _), _)| l.col == col)
            .map(|((_, v), a)| (*a, v))
            .collect();
        let sector = terms.first()?.1.sector().clone();
        Some(SparseKet::linear_combination(sector, &terms))
    }
}

struct Builder<'a> {
    g: &'a [f64],
    min_col: usize,
    max_row: usize,
    sectors: Vec<Arc<SectorBasis>>,
    cols: Vec<Vec<SparseKet>>,
    // per column, per state: has its raised / lowered image been consumed?
    up_used: Vec<Vec<bool>>,
    down_used: Vec<Vec<bool>>,
    log: Vec<ResidualRecord>,
}

impl Builder<'_> {
    fn width(&self) -> usize {
        self.cols.len()
    }

    fn full(&self, c: usize) -> bool {
        self.cols[c].len() >= self.max_row || self.cols[c].len() >= self.sectors[c].dim()
    }

    fn push(&mut self, c: usize, v: SparseKet) {
        self.cols[c].push(v);
        self.up_used[c].push(false);
        self.down_used[c].push(false);
    }

    fn label(&self, c: usize) -> ChainLabel {
        ChainLabel { row: self.cols[c].len() + 1, col: self.min_col + c }
    }

    fn record(&mut self, c: usize, o: &Orthogonalized, reason: DiscardReason) {
        let relative = if o.candidate_norm > 0.0 { o.residual_norm / o.candidate_norm } else { 0.0 };
        let label = self.label(c);
        self.log.push(ResidualRecord { label, norm: o.residual_norm, relative, reason });
    }

    /// Unused candidates for column `c`, in trial order: `(from column, state, raised?)`.
    fn candidates(&self, c: usize) -> Vec<(usize, usize, bool)> {
        let mut out = Vec::new();
        if c > 0 {
            for k in (0..self.cols[c - 1].len()).rev() {
                if !self.up_used[c - 1][k] {
                    out.push((c - 1, k, true));
                }
            }
        }
        if c + 1 < self.width() {
            for k in (0..self.cols[c + 1].len()).rev() {
                if !self.down_used[c + 1][k] {
                    out.push((c + 1, k, false));
                }
            }
        }
        out
    }

    fn image(&self, from: usize, k: usize, raised: bool) -> SparseKet {
        if raised {
            raise_to(self.g, &self.cols[from][k], &self.sectors[from + 1])
        } else {
            lower_to(self.g, &self.cols[from][k], &self.sectors[from - 1])
        }
    }

    fn mark(&mut self, from: usize, k: usize, raised: bool) {
        if raised {
            self.up_used[from][k] = true;
        } else {
            self.down_used[from][k] = true;
        }
    }

    /// Tries the candidates of column `c` until one yields a new state.
    fn grow(&mut self, c: usize) -> bool {
        for (from, k, raised) in self.candidates(c) {
            let o = orthogonalize(&self.image(from, k, raised), &self.cols[c]);
            self.mark(from, k, raised);
            if o.dependent {
                self.record(c, &o, DiscardReason::Dependent);
            } else {
                self.push(c, o.residual);
                return true;
            }
        }
        false
    }
}

/// Builds the chain generated from `seed` inside columns `min_col..=max_col`,
/// keeping at most `max_row` states per column.
pub fn build_chain(
    profile: &CouplingProfile,
    model: Model,
    seed: &SparseKet,
    min_col: usize,
    max_col: usize,
    max_row: usize,
) -> Result<EffectiveBasis> {
    check_profile(profile, seed)?;
    let n = profile.len();
    let c0 = seed.n_excited();
    if max_col > n {
        return invalid(format!("max_col {max_col} exceeds the particle count {n}"));
    }
    if !(min_col <= c0 && c0 <= max_col) {
        return invalid(format!("seed column {c0} outside the window {min_col}..={max_col}"));
    }
    if max_row == 0 {
        return invalid("max_row must be at least 1");
    }
    let seed_norm = seed.norm();
    if seed_norm == 0.0 || !seed_norm.is_finite() {
        return invalid("seed must be a nonzero finite ket");
    }

    let width = max_col - min_col + 1;
    let mut sectors = Vec::with_capacity(width);
    for c in min_col..=max_col {
        sectors.push(if c == c0 { seed.sector().clone() } else { Arc::new(SectorBasis::new(n, c)?) });
    }
    let mut b = Builder {
        g: profile.values(),
        min_col,
        max_row,
        sectors,
        cols: vec![Vec::new(); width],
        up_used: vec![Vec::new(); width],
        down_used: vec![Vec::new(); width],
        log: Vec::new(),
    };

    let s = c0 - min_col;
    b.push(s, seed.scale(C64::new(1.0 / seed_norm, 0.0)));
    // row 1: the raising ladder above the seed
    for c in s + 1..width {
        let o = orthogonalize(&b.image(c - 1, 0, true), &b.cols[c]);
        b.mark(c - 1, 0, true);
        if o.dependent {
            b.record(c, &o, DiscardReason::Dependent);
            break;
        }
        b.push(c, o.residual);
    }
    loop {
        let mut added = false;
        for c in 0..width {
            if !b.full(c) {
                added |= b.grow(c);
            }
        }
        if !added {
            break;
        }
    }
    // residuals that were still independent when their column was full
    for c in 0..width {
        if b.cols[c].len() < b.max_row || b.cols[c].len() >= b.sectors[c].dim() {
            continue;
        }
        for (from, k, raised) in b.candidates(c) {
            let o = orthogonalize(&b.image(from, k, raised), &b.cols[c]);
            let reason = if o.dependent { DiscardReason::Dependent } else { DiscardReason::Truncated };
            b.record(c, &o, reason);
        }
    }

    let mut labels = Vec::new();
    let mut vectors = Vec::new();
    for (c, col) in b.cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            labels.push(ChainLabel { row: r + 1, col: min_col + c });
            vectors.push(v.clone());
        }
    }
    let dim = labels.len();
    let mut couplings = CMatrix::zeros(dim, dim);
    let start: Vec<usize> = (0..width)
        .scan(0, |acc, c| {
            let here = *acc;
            *acc += b.cols[c].len();
            Some(here)
        })
        .collect();
    for c in 0..width.saturating_sub(1) {
        for (k, v) in b.cols[c].iter().enumerate() {
            let up = raise_to(b.g, v, &b.sectors[c + 1]);
            for (k2, w) in b.cols[c + 1].iter().enumerate() {
                couplings[(start[c + 1] + k2, start[c] + k)] = w.dot(&up);
            }
        }
    }
    let seed_index = start[s];
    Ok(EffectiveBasis {
        model,
        profile: profile.clone(),
        min_col,
        max_col,
        max_row,
        seed: seed_index,
        labels,
        vectors,
        couplings,
        residual_log: b.log,
    })
}

/// The chain grown from the collective ground state `|0̄⟩` over columns
/// `0..=max_col`.
pub fn build_effective_basis(
    profile: &CouplingProfile,
    model: Model,
    max_col: usize,
    max_row: usize,
) -> Result<EffectiveBasis> {
    if max_col > profile.len() {
        return invalid(format!("max_col {max_col} exceeds the particle count {}", profile.len()));
    }
    let ground = Arc::new(SectorBasis::new(profile.len(), 0)?);
    build_chain(profile, model, &SparseKet::basis_state(ground, 0), 0, max_col, max_row)
}
