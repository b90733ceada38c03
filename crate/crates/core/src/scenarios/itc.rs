//! Atoms in `|0̄⟩` against a coherent cavity field.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::chain::{build_effective_basis, ChainLabel, EffectiveBasis, Model};
use crate::effective::{assemble_effective_hamiltonian, Factor};
use crate::error::{invalid, Result};
use crate::exact::{assemble_itc_full, coherent_amplitudes, coherent_field_dim, FullBasisItc};
use crate::linalg::CVector;
use crate::observables::{quadrature_variance, reduce_first_factor, ObservableSpec};
use crate::profile::CouplingProfile;
use crate::propagate::Propagator;

use super::series::TimeSeries;

/// Discarded coherent-state probability used to pick the Fock cutoff.
pub const FOCK_TAIL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ItcEngine {
    Effective {
        max_row: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_col: Option<usize>,
    },
    Exact,
}

#[derive(Debug, Clone)]
pub struct ItcRun {
    pub series: TimeSeries,
    pub dim: usize,
    pub field_dim: usize,
    /// The chain basis, when one was built.
    pub basis: Option<EffectiveBasis>,
}

/// Fock cutoff for a coherent field of mean photon number `nbar`.
pub fn field_dim_for(nbar: f64, field_dim: Option<usize>) -> Result<usize> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return invalid(format!("mean photon number must be finite and non-negative, got {nbar}"));
    }
    match field_dim {
        Some(0) => invalid("field_dim must be at least 1"),
        Some(d) => Ok(d),
        None => Ok(coherent_field_dim(nbar, FOCK_TAIL)),
    }
}

/// Coherent amplitudes on `0..field_dim`, renormalized after truncation.
pub fn field_state(nbar: f64, field_dim: usize) -> Vec<f64> {
    let c = coherent_amplitudes(nbar, field_dim);
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    c.into_iter().map(|x| x / norm).collect()
}

fn check_observables(obs: &[ObservableSpec]) -> Result<()> {
    for o in obs {
        match o {
            ObservableSpec::StatePopulation { .. } | ObservableSpec::RowPopulation { .. } | ObservableSpec::QuadratureVariance => {}
            other => return invalid(format!("observable {} is not defined for cavity runs", other.column_name())),
        }
    }
    Ok(())
}

/// Chain indices selected by a population observable.
fn selected(basis: &EffectiveBasis, o: &ObservableSpec) -> Result<Vec<usize>> {
    match o {
        ObservableSpec::StatePopulation { labels, .. } => super::central::chain_indices(basis, labels),
        ObservableSpec::RowPopulation { rows } => {
            Ok(basis.labels().iter().enumerate().filter(|(_, l)| rows.contains(&l.row)).map(|(i, _)| i).collect())
        }
        _ => Ok(Vec::new()),
    }
}

fn rows_needed(obs: &[ObservableSpec]) -> usize {
    obs.iter()
        .map(|o| match o {
            ObservableSpec::StatePopulation { labels, .. } => labels.iter().map(|l| l.row).max().unwrap_or(1),
            ObservableSpec::RowPopulation { rows } => rows.iter().copied().max().unwrap_or(1),
            _ => 1,
        })
        .max()
        .unwrap_or(1)
}

/// Evolves `|α⟩|0̄⟩` and samples `observables` on `times`.
pub fn run_itc(
    profile: &CouplingProfile,
    nbar: f64,
    field_dim: Option<usize>,
    engine: ItcEngine,
    observables: &[ObservableSpec],
    times: &[f64],
) -> Result<ItcRun> {
    check_observables(observables)?;
    let fd = field_dim_for(nbar, field_dim)?;
    let field = field_state(nbar, fd);
    let n = profile.len();
    let mut series = TimeSeries::new(times.to_vec())?;
    let mut cols = vec![Vec::with_capacity(times.len()); observables.len()];
    match engine {
        ItcEngine::Effective { max_row, max_col } => {
            let max_col = max_col.unwrap_or(n.min(fd - 1));
            if max_col > n {
                return invalid(format!("max_col {max_col} exceeds N = {n}"));
            }
            let basis = build_effective_basis(profile, Model::Itc, max_col, max_row)?;
            let h = assemble_effective_hamiltonian(&basis, Factor::Field { field_dim: fd })?;
            let seed = basis.seed_index();
            let mut psi0 = CVector::zeros(h.dim());
            for (n_ph, c) in field.iter().enumerate() {
                let i = h.index_of(n_ph, seed).expect("every Fock level carries |0̄⟩");
                psi0[i] = C64::new(*c, 0.0);
            }
            let evo = h.evolution(&psi0)?;
            let picks = observables.iter().map(|o| selected(&basis, o)).collect::<Result<Vec<_>>>()?;
            for &t in times {
                let psi = evo.state_at(t);
                for ((o, col), pick) in observables.iter().zip(cols.iter_mut()).zip(&picks) {
                    col.push(match o {
                        ObservableSpec::QuadratureVariance => {
                            let rho = reduce_first_factor(
                                fd,
                                h.labels().iter().zip(psi.iter()).map(|(l, a)| (l.factor, l.chain, *a)),
                            );
                            quadrature_variance(&rho)
                        }
                        _ => h
                            .labels()
                            .iter()
                            .zip(psi.iter())
                            .filter(|(l, _)| pick.contains(&l.chain))
                            .map(|(_, a)| a.norm_sqr())
                            .sum(),
                    });
                }
            }
            for (o, col) in observables.iter().zip(cols) {
                series.push(o.column_name(), col)?;
            }
            Ok(ItcRun { series, dim: h.dim(), field_dim: fd, basis: Some(basis) })
        }
        ItcEngine::Exact => {
            let (full, h) = assemble_itc_full(profile, fd)?;
            let mut psi0 = CVector::zeros(full.dim());
            for (n_ph, c) in field.iter().enumerate() {
                psi0[full.index(n_ph, 0)] = C64::new(*c, 0.0);
            }
            let needs_chain = observables.iter().any(|o| !matches!(o, ObservableSpec::QuadratureVariance));
            let basis = if needs_chain {
                Some(build_effective_basis(profile, Model::Itc, n.min(fd - 1), rows_needed(observables))?)
            } else {
                None
            };
            let picks = match &basis {
                Some(b) => observables.iter().map(|o| selected(b, o)).collect::<Result<Vec<_>>>()?,
                None => vec![Vec::new(); observables.len()],
            };
            let mut prop = Propagator::new(&h, &psi0)?;
            for &t in times {
                let psi = prop.state_at(t)?;
                for ((o, col), pick) in observables.iter().zip(cols.iter_mut()).zip(&picks) {
                    col.push(match o {
                        ObservableSpec::QuadratureVariance => {
                            let rho = reduce_first_factor(
                                fd,
                                psi.iter().enumerate().map(|(i, a)| {
                                    let (n_ph, mask) = full.decode(i);
                                    (n_ph, mask as usize, *a)
                                }),
                            );
                            quadrature_variance(&rho)
                        }
                        _ => project_itc(basis.as_ref().expect("built above"), pick, &full, &psi),
                    });
                }
            }
            for (o, col) in observables.iter().zip(cols) {
                series.push(o.column_name(), col)?;
            }
            Ok(ItcRun { series, dim: full.dim(), field_dim: fd, basis })
        }
    }
}

/// `Σ_{k ∈ pick} Σ_n |⟨n, v_k|ψ⟩|²`.
fn project_itc(basis: &EffectiveBasis, pick: &[usize], full: &FullBasisItc, psi: &CVector) -> f64 {
    let mut total = 0.0;
    for &k in pick {
        let v = &basis.vectors()[k];
        for n_ph in 0..full.field_dim {
            let mut acc = C64::new(0.0, 0.0);
            for &(i, a) in v.entries() {
                acc += a.conj() * psi[full.index(n_ph, v.sector().unrank_mask(i))];
            }
            total += acc.norm_sqr();
        }
    }
    total
}

/// `P_{|0̄⟩}`, the default cavity observable.
pub fn ground_population() -> ObservableSpec {
    ObservableSpec::StatePopulation { labels: vec![ChainLabel { row: 1, col: 0 }], name: Some("P0".into()) }
}
