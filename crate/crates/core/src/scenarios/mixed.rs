//! Incoherent nuclear states: one-defect mixtures and thermal ensembles.
//!
//! Both initial nuclear density matrices are diagonal in the computational
//! basis, so the evolution splits into pure branches whose populations add
//! with the mixture weights. `P_↑` is block diagonal in the excitation
//! number, so the electron coherence `u v*` never contributes.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::exact::{assemble_qd_sector, QD_FULL_MAX_N};
use crate::linalg::{hermitian_eig, CMatrix, CVector};
use crate::profile::CouplingProfile;
use crate::effective::SPIN_UP;

use super::central::{check_electron, ThreeStateParams};
use super::series::TimeSeries;

/// `P_↑(t)` for `|↑⟩|1_j⟩`, one trace per site `j`.
///
/// The branch lives in the two-excitation sector: `|↑⟩` with one flipped
/// nucleus, coupled through `½A₊` to `|↓⟩` with two. Every singular pair of
/// that coupling is an independent two-level system, so one `N × N`
/// eigenproblem serves all `N` branches.
pub fn up_branch_populations(profile: &CouplingProfile, times: &[f64]) -> Vec<Vec<f64>> {
    let n = profile.len();
    let g = profile.values();
    let abar = profile.mean();
    let n0sq = profile.sum_sq();
    // ⟨1_i|A₋A₊|1_j⟩ = N₀² δ_ij + α_i α_j − 2 α_i² δ_ij
    let m = DMatrix::from_fn(n, n, |i, j| {
        let mut x = g[i] * g[j];
        if i == j {
            x += n0sq - 2.0 * g[i] * g[i];
        }
        x
    });
    let eig = m.symmetric_eigen();
    // two-level block [[ᾱ/2, σ], [σ, −ᾱ]] with σ = ½√μ
    let d = 0.75 * abar;
    // time-major so the per-site sums below read contiguously
    let mut persist = vec![0.0; times.len() * n];
    for (k, &mu) in eig.eigenvalues.iter().enumerate() {
        let s2 = 0.25 * mu.max(0.0);
        let big = (d * d + s2).sqrt();
        for (ti, &t) in times.iter().enumerate() {
            persist[ti * n + k] = if big == 0.0 { 1.0 } else { 1.0 - s2 / (big * big) * (big * t).sin().powi(2) };
        }
    }
    (0..n)
        .into_par_iter()
        .map(|j| {
            let w: Vec<f64> = (0..n).map(|k| eig.eigenvectors[(j, k)].powi(2)).collect();
            persist.chunks_exact(n).map(|pk| w.iter().zip(pk).map(|(wk, p)| wk * p).sum()).collect()
        })
        .collect()
}

/// `P_↑(t)` for `|↓⟩|1_j⟩`, from the closed three-state solution.
pub fn down_branch_populations(profile: &CouplingProfile, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = profile.len();
    (0..n)
        .into_par_iter()
        .map(|j| {
            let mut site = vec![0.0; n];
            site[j] = 1.0;
            let p = ThreeStateParams::new(profile, &site)?;
            // |b₁|² = (γ/δ)² sin²(δt/2)
            let scale = (p.gamma / p.delta).powi(2);
            Ok(times.iter().map(|&t| scale * (0.5 * p.delta * t).sin().powi(2)).collect())
        })
        .collect()
}

pub fn check_weights(weights: &[f64], n: usize) -> Result<()> {
    if weights.len() != n {
        return invalid(format!("{} mixture weights for {n} sites", weights.len()));
    }
    if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
        return invalid("mixture weights must be finite and non-negative");
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return invalid(format!("mixture weights sum to {total}, expected 1"));
    }
    Ok(())
}

/// Electron `u|↑⟩ + v|↓⟩` with nuclei in `Σ_j a_j |1_j⟩⟨1_j|`; columns
/// `P_up`, `P_down`.
pub fn run_qd_mixed(profile: &CouplingProfile, weights: &[f64], electron: (C64, C64), times: &[f64]) -> Result<TimeSeries> {
    check_weights(weights, profile.len())?;
    let (u, v) = electron;
    check_electron(u, v)?;
    let (pu, pv) = (u.norm_sqr(), v.norm_sqr());
    let up = if pu > 0.0 { up_branch_populations(profile, times) } else { Vec::new() };
    let down = if pv > 0.0 { down_branch_populations(profile, times)? } else { Vec::new() };
    let mut p_up = vec![0.0; times.len()];
    for (j, a) in weights.iter().enumerate() {
        for (ti, p) in p_up.iter_mut().enumerate() {
            if pu > 0.0 {
                *p += a * pu * up[j][ti];
            }
            if pv > 0.0 {
                *p += a * pv * down[j][ti];
            }
        }
    }
    let mut s = TimeSeries::new(times.to_vec())?;
    let p_down = p_up.iter().map(|p| 1.0 - p).collect();
    s.push("P_up", p_up)?;
    s.push("P_down", p_down)?;
    Ok(s)
}

/// Per-spin excited population must lie in `[0, ½)`.
pub fn check_k_mean(k: f64) -> Result<()> {
    if !(0.0..0.5).contains(&k) {
        return invalid(format!("thermal excitation ⟨k⟩ must lie in [0, 0.5), got {k}"));
    }
    Ok(())
}

/// Electron `u|↑⟩ + v|↓⟩` with every nucleus thermal, excited with
/// probability `k`; columns `P_up`, `P_down`.
///
/// Each excitation sector is diagonalized once and the whole diagonal initial
/// density matrix of that sector is propagated as `tr(Π_↑ U D U†)`.
pub fn run_qd_thermal(profile: &CouplingProfile, k: f64, electron: (C64, C64), times: &[f64]) -> Result<TimeSeries> {
    let n = profile.len();
    if n > QD_FULL_MAX_N {
        return Err(Error::Guard(format!("thermal runs are limited to N ≤ {QD_FULL_MAX_N}, got N = {n}")));
    }
    check_k_mean(k)?;
    let (u, v) = electron;
    check_electron(u, v)?;
    let weight = |flips: usize| k.powi(flips as i32) * (1.0 - k).powi((n - flips) as i32);
    let parts: Vec<Vec<f64>> = (0..=n + 1)
        .into_par_iter()
        .map(|kk| -> Result<Vec<f64>> {
            let (sector, h) = assemble_qd_sector(profile, kk, false)?;
            let d = sector.dim();
            let diag: Vec<f64> = (0..d)
                .map(|i| {
                    let (spin, mask) = sector.decode(i);
                    let flips = mask.count_ones() as usize;
                    if spin == SPIN_UP { u.norm_sqr() * weight(flips) } else { v.norm_sqr() * weight(flips) }
                })
                .collect();
            if diag.iter().all(|w| *w == 0.0) {
                return Ok(vec![0.0; times.len()]);
            }
            let (w, vecs) = hermitian_eig(&h.to_dense())?;
            let is_up: Vec<bool> = (0..d).map(|i| sector.decode(i).0 == SPIN_UP).collect();
            // A = V†DV, B = V†ΠV, C_ab = A_ab B_ba
            let dv = CMatrix::from_fn(d, d, |i, j| vecs[(i, j)] * diag[i]);
            let pv = CMatrix::from_fn(d, d, |i, j| if is_up[i] { vecs[(i, j)] } else { C64::new(0.0, 0.0) });
            let a = vecs.adjoint() * dv;
            let b = vecs.adjoint() * pv;
            let c = a.component_mul(&b.transpose());
            Ok(times
                .iter()
                .map(|&t| {
                    let x = CVector::from_iterator(d, w.iter().map(|l| C64::from_polar(1.0, -l * t)));
                    let y = &c * x.map(|z| z.conj());
                    x.iter().zip(y.iter()).map(|(p, q)| p * q).sum::<C64>().re
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut p_up = vec![0.0; times.len()];
    for part in &parts {
        for (p, x) in p_up.iter_mut().zip(part) {
            *p += x;
        }
    }
    let mut s = TimeSeries::new(times.to_vec())?;
    let p_down = p_up.iter().map(|p| 1.0 - p).collect();
    s.push("P_up", p_up)?;
    s.push("P_down", p_down)?;
    Ok(s)
}
