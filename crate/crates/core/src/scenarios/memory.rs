//! Write-in, storage and retrieval of an electron spin state in the nuclei.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::effective::{SPIN_DOWN, SPIN_UP};
use crate::error::{invalid, Result};
use crate::ket::SparseKet;
use crate::linalg::{CMatrix, CVector, DensityMatrixSmall};
use crate::observables::bloch_points;
use crate::profile::CouplingProfile;
use crate::sector::SectorBasis;

use super::central::SpinBranch;
use super::defect::DefectDistribution;

/// The cycle as a linear map of the initial electron amplitudes.
///
/// `tensor[(2e + a, 2e' + b)]` is the coefficient of `c_e c*_e'` in
/// `ρ_f[a, b]`, where the initial electron is `c_↑|↑⟩ + c_↓|↓⟩`.
#[derive(Debug, Clone)]
pub struct MemoryChannel {
    tensor: CMatrix,
    /// Phase removed from the `|↑⟩` component before scoring.
    phase: f64,
}

fn evolve(profile: &CouplingProfile, spin: usize, ket: &SparseKet, t: f64, max_row: usize) -> Result<Vec<(usize, SparseKet)>> {
    if ket.nnz() == 0 {
        return Ok(Vec::new());
    }
    let b = SpinBranch::new(profile, spin, ket, max_row)?;
    Ok(b.components(&b.state_at(t)))
}

impl MemoryChannel {
    /// Channel for the nuclei starting in `|0⟩` (no defect) or in the given
    /// one-defect state, with storage time `tau`.
    pub fn new(profile: &CouplingProfile, defect: Option<&DefectDistribution>, tau: f64, max_row: usize) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return invalid(format!("storage time must be finite and non-negative, got {tau}"));
        }
        let n = profile.len();
        let init = match defect {
            None => SparseKet::basis_state(std::sync::Arc::new(SectorBasis::new(n, 0)?), 0),
            Some(d) => d.ket(n)?,
        };
        // out[e][s]: retrieved pieces for input e, electron found in s at storage
        let per_input: Vec<Vec<Vec<(usize, SparseKet)>>> = [SPIN_UP, SPIN_DOWN]
            .par_iter()
            .map(|&e| {
                let written = evolve(profile, e, &init, tau, max_row)?;
                [SPIN_UP, SPIN_DOWN]
                    .iter()
                    .map(|&s| {
                        let mut out = Vec::new();
                        for (spin, nuc) in written.iter().filter(|(spin, _)| *spin == s) {
                            debug_assert_eq!(*spin, s);
                            out.extend(evolve(profile, SPIN_DOWN, nuc, tau, max_row)?);
                        }
                        Ok(out)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut tensor = CMatrix::zeros(4, 4);
        for s in 0..2 {
            for e in 0..2 {
                for e2 in 0..2 {
                    for (a, p) in &per_input[e][s] {
                        for (b, q) in &per_input[e2][s] {
                            if p.n_excited() == q.n_excited() {
                                tensor[(2 * e + a, 2 * e2 + b)] += q.dot(p);
                            }
                        }
                    }
                }
            }
        }
        Ok(Self { tensor, phase: 0.0 })
    }

    /// The same channel scored after removing `phase` from `|↑⟩`.
    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// `arg ⟨↑|ρ_f|↓⟩` for the input `|+⟩`, the deterministic phase the cycle
    /// imprints on coherences.
    pub fn coherence_phase(&self) -> f64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        self.raw_output(C64::new(s, 0.0), C64::new(s, 0.0))[(SPIN_UP, SPIN_DOWN)].arg()
    }

    fn raw_output(&self, u: C64, v: C64) -> CMatrix {
        let c = [u, v];
        let mut rho = CMatrix::zeros(2, 2);
        for e in 0..2 {
            for e2 in 0..2 {
                let w = c[e] * c[e2].conj();
                for a in 0..2 {
                    for b in 0..2 {
                        rho[(a, b)] += w * self.tensor[(2 * e + a, 2 * e2 + b)];
                    }
                }
            }
        }
        rho
    }

    /// Final electron state for the input `u|↑⟩ + v|↓⟩`, phase-corrected.
    pub fn output(&self, u: C64, v: C64) -> Result<DensityMatrixSmall> {
        super::central::check_electron(u, v)?;
        let mut rho = self.raw_output(u, v);
        let r = C64::from_polar(1.0, -self.phase);
        rho[(SPIN_UP, SPIN_DOWN)] *= r;
        rho[(SPIN_DOWN, SPIN_UP)] *= r.conj();
        // restore exact Hermiticity lost to rounding in the sums
        let rho = (&rho + rho.adjoint()).scale(0.5);
        DensityMatrixSmall::new(rho)
    }

    pub fn fidelity(&self, u: C64, v: C64) -> Result<f64> {
        let rho = self.output(u, v)?;
        rho.expectation_pure(&CVector::from_vec(vec![u, v]))
    }

    /// Fidelity averaged over `m` Bloch-sphere points.
    pub fn average_fidelity(&self, m: usize) -> Result<f64> {
        if m < 6 {
            return invalid(format!("Bloch averaging needs at least 6 points, got {m}"));
        }
        let mut sum = 0.0;
        for (u, v) in bloch_points(m) {
            sum += self.fidelity(u, v)?;
        }
        Ok(sum / m as f64)
    }
}

/// Phase-corrected channel: the correction is the coherence phase of the
/// defect-free cycle with the same profile and storage time.
pub fn corrected_channel(
    profile: &CouplingProfile,
    defect: Option<&DefectDistribution>,
    tau: f64,
    max_row: usize,
) -> Result<MemoryChannel> {
    let reference = MemoryChannel::new(profile, None, tau, max_row)?;
    let phase = reference.coherence_phase();
    match defect {
        None => Ok(reference.with_phase(phase)),
        Some(_) => Ok(MemoryChannel::new(profile, defect, tau, max_row)?.with_phase(phase)),
    }
}

/// One full cycle for the input `u|↑⟩ + v|↓⟩`.
pub fn memory_cycle(
    profile: &CouplingProfile,
    defect: Option<&DefectDistribution>,
    psi_e: (C64, C64),
    tau: f64,
) -> Result<DensityMatrixSmall> {
    if !(tau > 0.0) {
        return invalid("storage time must be positive");
    }
    corrected_channel(profile, defect, tau, super::central::BRANCH_MAX_ROW)?.output(psi_e.0, psi_e.1)
}
