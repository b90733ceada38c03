use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::ket::SparseKet;
use crate::sector::SectorBasis;

/// Where the single nuclear excitation sits. Site `j` runs `1..=N` and
/// follows the coupling profile order, so `j = 1` is the dot centre and
/// `j = N` its edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DefectDistribution {
    Uniform,
    Lorentzian {
        j0: usize,
        #[serde(rename = "Gamma")]
        gamma: f64,
    },
    SingleSite { j0: usize },
}

impl DefectDistribution {
    /// Real amplitudes `a_j` normalized to `Σ a_j² = 1`.
    pub fn amplitudes(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return invalid("a defect needs at least one site");
        }
        let check_site = |j0: usize| {
            if (1..=n).contains(&j0) {
                Ok(())
            } else {
                invalid(format!("defect site j0 = {j0} outside 1..={n}"))
            }
        };
        let raw: Vec<f64> = match *self {
            DefectDistribution::Uniform => vec![1.0; n],
            DefectDistribution::Lorentzian { j0, gamma } => {
                check_site(j0)?;
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return invalid(format!("Lorentzian width must be positive, got {gamma}"));
                }
                let hw2 = (gamma / 2.0).powi(2);
                (1..=n).map(|j| hw2 / ((j as f64 - j0 as f64).powi(2) + hw2)).collect()
            }
            DefectDistribution::SingleSite { j0 } => {
                check_site(j0)?;
                (1..=n).map(|j| if j == j0 { 1.0 } else { 0.0 }).collect()
            }
        };
        let norm = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
        Ok(raw.into_iter().map(|a| a / norm).collect())
    }

    /// `Σ_j a_j |1_j⟩` as a one-excitation ket.
    pub fn ket(&self, n: usize) -> Result<SparseKet> {
        let amps: Vec<C64> = self.amplitudes(n)?.into_iter().map(|a| C64::new(a, 0.0)).collect();
        // colex rank of the subset {j} is j itself
        Ok(SparseKet::from_dense(Arc::new(SectorBasis::new(n, 1)?), &amps))
    }

    /// Mixture weights `a_j²` for the incoherent version of this defect.
    pub fn weights(&self, n: usize) -> Result<Vec<f64>> {
        Ok(self.amplitudes(n)?.into_iter().map(|a| a * a).collect())
    }

    pub fn with_j0(self, j0: usize) -> Result<Self> {
        match self {
            DefectDistribution::Lorentzian { gamma, .. } => Ok(DefectDistribution::Lorentzian { j0, gamma }),
            DefectDistribution::SingleSite { .. } => Ok(DefectDistribution::SingleSite { j0 }),
            DefectDistribution::Uniform => invalid("a uniform defect has no j0"),
        }
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        match self {
            DefectDistribution::Lorentzian { j0, .. } => Ok(DefectDistribution::Lorentzian { j0, gamma }),
            _ => invalid("only a Lorentzian defect has a width"),
        }
    }
}
