//! Brute-force Hamiltonians on the full Hilbert space.
//!
//! These are the reference the chain truncation is checked against. States of
//! the two-level systems are bitmasks (bit `i` set = particle `i` excited, or
//! nuclear spin `i` flipped out of the polarized state).

use num_complex::Complex64 as C64;

use crate::chain::EffectiveBasis;
use crate::effective::{EffectiveHamiltonian, SPIN_DOWN, SPIN_UP};
use crate::error::{invalid, Error, Result};
use crate::linalg::CVector;
use crate::profile::CouplingProfile;
use crate::sector::SectorBasis;
use crate::sparse::CsrMatrix;

pub const ITC_MAX_N: usize = 16;
pub const QD_FULL_MAX_N: usize = 12;
pub const QD_SECTOR_MAX_N: usize = 20;

/// `|n⟩ ⊗ |mask⟩`, indexed `n · 2^N + mask`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullBasisItc {
    pub n: usize,
    pub field_dim: usize,
}

impl FullBasisItc {
    pub fn dim(&self) -> usize {
        self.field_dim << self.n
    }

    pub fn index(&self, photons: usize, mask: u64) -> usize {
        (photons << self.n) | mask as usize
    }

    pub fn decode(&self, index: usize) -> (usize, u64) {
        (index >> self.n, (index & ((1 << self.n) - 1)) as u64)
    }

    pub fn excitation(&self, index: usize) -> usize {
        let (p, m) = self.decode(index);
        p + m.count_ones() as usize
    }

    /// Sizes of the conserved-excitation blocks, indexed by excitation.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.field_dim + self.n];
        for i in 0..self.dim() {
            out[self.excitation(i)] += 1;
        }
        out
    }
}

/// `|s⟩ ⊗ |mask⟩` with `s` = [`SPIN_UP`] or [`SPIN_DOWN`], indexed `s · 2^N + mask`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullBasisQd {
    pub n: usize,
}

impl FullBasisQd {
    pub fn dim(&self) -> usize {
        2 << self.n
    }

    pub fn index(&self, spin: usize, mask: u64) -> usize {
        (spin << self.n) | mask as usize
    }

    pub fn decode(&self, index: usize) -> (usize, u64) {
        (index >> self.n, (index & ((1 << self.n) - 1)) as u64)
    }

    /// `S_z + Σ I_z` shifted to count excitations above `|↓, 0⟩`.
    pub fn excitation(&self, index: usize) -> usize {
        let (s, m) = self.decode(index);
        m.count_ones() as usize + usize::from(s == SPIN_UP)
    }
}

/// `H = Σ g_i (σ_i⁻ a† + σ_i⁺ a)` on `field_dim` Fock levels.
pub fn assemble_itc_full(profile: &CouplingProfile, field_dim: usize) -> Result<(FullBasisItc, CsrMatrix)> {
    let n = profile.len();
    if n > ITC_MAX_N {
        return Err(Error::Guard(format!("exact ITC engine is limited to N ≤ {ITC_MAX_N}, got N = {n}")));
    }
    if field_dim == 0 {
        return invalid("field_dim must be at least 1");
    }
    let basis = FullBasisItc { n, field_dim };
    let g = profile.values();
    let mut t = Vec::with_capacity(basis.dim() * n);
    for p in 0..field_dim {
        for mask in 0..1u64 << n {
            let from = basis.index(p, mask);
            for (i, gi) in g.iter().enumerate() {
                let bit = 1u64 << i;
                if mask & bit != 0 && p + 1 < field_dim {
                    // σ_i⁻ a†
                    let v = gi * ((p + 1) as f64).sqrt();
                    t.push((basis.index(p + 1, mask ^ bit), from, C64::new(v, 0.0)));
                } else if mask & bit == 0 && p > 0 {
                    // σ_i⁺ a
                    let v = gi * (p as f64).sqrt();
                    t.push((basis.index(p - 1, mask | bit), from, C64::new(v, 0.0)));
                }
            }
        }
    }
    Ok((basis, CsrMatrix::from_triplets(basis.dim(), t)))
}

fn qd_terms(
    profile: &CouplingProfile,
    include_zz: bool,
    spin: usize,
    mask: u64,
    mut emit: impl FnMut(usize, u64, f64),
) {
    let a = profile.values();
    let sz = if spin == SPIN_UP { 0.5 } else { -0.5 };
    let diag = if include_zz {
        // S_z (A_z − ⟨A_z⟩₀) = S_z Σ_{i flipped} α_i
        sz * (0..a.len()).filter(|i| mask >> i & 1 == 1).map(|i| a[i]).sum::<f64>()
    } else {
        sz * profile.mean() * mask.count_ones() as f64
    };
    if diag != 0.0 {
        emit(spin, mask, diag);
    }
    for (i, ai) in a.iter().enumerate() {
        let bit = 1u64 << i;
        if spin == SPIN_UP && mask & bit == 0 {
            // ½ α_i S⁻ I_i⁺
            emit(SPIN_DOWN, mask | bit, 0.5 * ai);
        } else if spin == SPIN_DOWN && mask & bit != 0 {
            // ½ α_i S⁺ I_i⁻
            emit(SPIN_UP, mask ^ bit, 0.5 * ai);
        }
    }
}

/// `H = ½(A₋S₊ + A₊S₋) + ᾱ S_z (J_z − ⟨J_z⟩₀)` on all `2^{N+1}` states; with
/// `include_zz` the second term becomes `S_z (A_z − ⟨A_z⟩₀)`.
pub fn assemble_qd_full(profile: &CouplingProfile, include_zz: bool) -> Result<(FullBasisQd, CsrMatrix)> {
    let n = profile.len();
    if n > QD_FULL_MAX_N {
        return Err(Error::Guard(format!(
            "exact full-space central-spin engine is limited to N ≤ {QD_FULL_MAX_N}, got N = {n}"
        )));
    }
    let basis = FullBasisQd { n };
    let mut t = Vec::new();
    for spin in [SPIN_UP, SPIN_DOWN] {
        for mask in 0..1u64 << n {
            let from = basis.index(spin, mask);
            qd_terms(profile, include_zz, spin, mask, |s, m, v| {
                t.push((basis.index(s, m), from, C64::new(v, 0.0)))
            });
        }
    }
    Ok((basis, CsrMatrix::from_triplets(basis.dim(), t)))
}

/// One conserved sector of the central-spin problem: `|↑⟩` with `k − 1`
/// flipped nuclei followed by `|↓⟩` with `k`.
#[derive(Debug, Clone)]
pub struct QdSector {
    pub n: usize,
    pub k: usize,
    up: Option<SectorBasis>,
    down: Option<SectorBasis>,
}

impl QdSector {
    fn up_dim(&self) -> usize {
        self.up.as_ref().map_or(0, |b| b.dim())
    }

    pub fn dim(&self) -> usize {
        self.up_dim() + self.down.as_ref().map_or(0, |b| b.dim())
    }

    pub fn index(&self, spin: usize, mask: u64) -> Option<usize> {
        match spin {
            SPIN_UP => self.up.as_ref().map(|b| b.rank_mask(mask)),
            _ => self.down.as_ref().map(|b| self.up_dim() + b.rank_mask(mask)),
        }
    }

    pub fn decode(&self, index: usize) -> (usize, u64) {
        if index < self.up_dim() {
            (SPIN_UP, self.up.as_ref().unwrap().unrank_mask(index))
        } else {
            (SPIN_DOWN, self.down.as_ref().unwrap().unrank_mask(index - self.up_dim()))
        }
    }
}

pub fn assemble_qd_sector(profile: &CouplingProfile, k: usize, include_zz: bool) -> Result<(QdSector, CsrMatrix)> {
    let n = profile.len();
    if n > QD_SECTOR_MAX_N {
        return Err(Error::Guard(format!(
            "exact sector central-spin engine is limited to N ≤ {QD_SECTOR_MAX_N}, got N = {n}"
        )));
    }
    if k > n + 1 {
        return invalid(format!("sector {k} does not exist for N = {n}"));
    }
    let up = if k >= 1 { Some(SectorBasis::new(n, k - 1)?) } else { None };
    let down = if k <= n { Some(SectorBasis::new(n, k)?) } else { None };
    let sector = QdSector { n, k, up, down };
    let mut t = Vec::new();
    for from in 0..sector.dim() {
        let (spin, mask) = sector.decode(from);
        qd_terms(profile, include_zz, spin, mask, |s, m, v| {
            let to = sector.index(s, m).expect("terms conserve the sector");
            t.push((to, from, C64::new(v, 0.0)))
        });
    }
    let dim = sector.dim();
    Ok((sector, CsrMatrix::from_triplets(dim, t)))
}

/// Coherent-state amplitudes `e^{-n̄/2} α^n / √n!` on `0..field_dim`.
pub fn coherent_amplitudes(nbar: f64, field_dim: usize) -> Vec<f64> {
    let alpha = nbar.sqrt();
    let mut out = Vec::with_capacity(field_dim);
    let mut a = (-nbar / 2.0).exp();
    for n in 0..field_dim {
        if n > 0 {
            a *= alpha / (n as f64).sqrt();
        }
        out.push(a);
    }
    out
}

/// Smallest Fock cutoff whose discarded coherent-state probability is below
/// `tail`.
pub fn coherent_field_dim(nbar: f64, tail: f64) -> usize {
    let mut kept = 0.0;
    let mut d = 0;
    let mut p = (-nbar).exp();
    loop {
        kept += p;
        d += 1;
        if 1.0 - kept < tail || d > 10_000 {
            return d;
        }
        p *= nbar / d as f64;
    }
}

/// Maps an effective ITC state onto the full basis.
pub fn embed_itc(basis: &EffectiveBasis, h: &EffectiveHamiltonian, psi: &CVector, full: &FullBasisItc) -> CVector {
    let mut out = CVector::zeros(full.dim());
    for (l, a) in h.labels().iter().zip(psi.iter()) {
        let v = &basis.vectors()[l.chain];
        for &(i, amp) in v.entries() {
            out[full.index(l.factor, v.sector().unrank_mask(i))] += a * amp;
        }
    }
    out
}

/// Maps an effective central-spin state onto the full basis.
pub fn embed_qd(basis: &EffectiveBasis, h: &EffectiveHamiltonian, psi: &CVector, full: &FullBasisQd) -> CVector {
    let mut out = CVector::zeros(full.dim());
    for (l, a) in h.labels().iter().zip(psi.iter()) {
        let v = &basis.vectors()[l.chain];
        for &(i, amp) in v.entries() {
            out[full.index(l.factor, v.sector().unrank_mask(i))] += a * amp;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;
    use crate::profile::{make_profile, ProfileKind, ProfileParams};

    fn prof(v: &[f64]) -> CouplingProfile {
        CouplingProfile::explicit(v.to_vec()).unwrap()
    }

    #[test]
    fn jaynes_cummings_vacuum_rabi() {
        let (b, h) = assemble_itc_full(&prof(&[1.0]), 2).unwrap();
        let e = b.index(0, 1);
        let g = b.index(1, 0);
        assert_eq!(h.get(e, g), C64::new(1.0, 0.0));
        assert_eq!(h.get(g, e), C64::new(1.0, 0.0));
        assert_eq!(h.get(e, e), C64::new(0.0, 0.0));
    }

    #[test]
    fn paper_size_and_hermiticity() {
        let p: ProfileParams = [("g".to_string(), 1.0)].into_iter().collect();
        let sine = make_profile(ProfileKind::SineCavity, 6, &p).unwrap();
        let (b, h) = assemble_itc_full(&sine, 7).unwrap();
        assert_eq!(b.dim(), 448);
        assert_eq!(h.hermitian_defect(), 0.0);
        assert_eq!(b.block_sizes().iter().sum::<usize>(), 448);
        for r in 0..h.dim() {
            for (c, _) in h.row(r) {
                assert_eq!(b.excitation(r), b.excitation(c));
            }
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(assemble_itc_full(&prof(&[1.0; 17]), 2), Err(Error::Guard(_))));
        assert!(matches!(assemble_qd_full(&prof(&[1.0; 13]), false), Err(Error::Guard(_))));
        assert!(matches!(assemble_qd_sector(&prof(&[1.0; 21]), 1, false), Err(Error::Guard(_))));
    }

    #[test]
    fn single_pair_exchange() {
        let (b, h) = assemble_qd_full(&prof(&[1.3]), false).unwrap();
        let dn_up = b.index(SPIN_DOWN, 1);
        let up_dn = b.index(SPIN_UP, 0);
        assert_eq!(h.get(dn_up, up_dn), C64::new(0.65, 0.0));
        // polarized |↓, 0⟩ is an exact (zero) eigenstate
        let pol = b.index(SPIN_DOWN, 0);
        assert_eq!(h.row(pol).count(), 0);
    }

    #[test]
    fn uniform_one_excitation_spectrum() {
        // uniform couplings: the 1-excitation sector splits into the 2-level
        // bright block and N−1 dark states at −ᾱ/2
        let n = 4;
        let a = 0.25;
        let (_, h) = assemble_qd_sector(&prof(&[a; 4]), 1, false).unwrap();
        let (l, _) = hermitian_eig(&h.to_dense()).unwrap();
        let n0 = (n as f64).sqrt() * a;
        let delta = ((a / 2.0).powi(2) + n0 * n0).sqrt();
        let mut want = vec![-a / 4.0 - delta / 2.0, -a / 4.0 + delta / 2.0];
        want.extend(vec![-a / 2.0; n - 1]);
        want.sort_by(f64::total_cmp);
        for (x, y) in l.iter().zip(&want) {
            assert!((x - y).abs() < 1e-14, "{l:?} vs {want:?}");
        }
    }

    #[test]
    fn sector_matches_full() {
        let p = prof(&[0.3, 0.9, 0.5, 0.7, 0.2]);
        for zz in [false, true] {
            let (fb, full) = assemble_qd_full(&p, zz).unwrap();
            for k in 0..=6 {
                let (s, h) = assemble_qd_sector(&p, k, zz).unwrap();
                for i in 0..s.dim() {
                    for j in 0..s.dim() {
                        let (si, mi) = s.decode(i);
                        let (sj, mj) = s.decode(j);
                        assert_eq!(h.get(i, j), full.get(fb.index(si, mi), fb.index(sj, mj)));
                    }
                }
            }
        }
    }

    #[test]
    fn coherent_cutoff() {
        let c = coherent_amplitudes(1.8, 40);
        let total: f64 = c.iter().map(|x| x * x).sum();
        assert!((total - 1.0).abs() < 1e-14);
        let d = coherent_field_dim(1.8, 1e-14);
        let kept: f64 = c[..d].iter().map(|x| x * x).sum();
        assert!(1.0 - kept < 1e-14);
        let kept_less: f64 = c[..d - 1].iter().map(|x| x * x).sum();
        assert!(1.0 - kept_less >= 1e-14);
        assert_eq!(coherent_field_dim(0.0, 1e-14), 1);
    }
}
