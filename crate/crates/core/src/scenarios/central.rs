//! Central-spin dynamics from one-defect nuclear states.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::chain::{build_chain, EffectiveBasis, Model};
use crate::effective::{assemble_effective_hamiltonian, BlockEvolution, EffectiveHamiltonian, Factor, SPIN_DOWN, SPIN_UP};
use crate::error::{invalid, Result};
use crate::exact::{assemble_qd_sector, QdSector};
use crate::ket::SparseKet;
use crate::linalg::{CMatrix, CVector};
use crate::observables::{tangle_from_reduced, ObservableSpec, Spin};
use crate::profile::CouplingProfile;
use crate::propagate::Propagator;

use super::defect::DefectDistribution;
use super::series::TimeSeries;

/// Rows per column of the two-column chains used for memory and tangle runs.
pub const BRANCH_MAX_ROW: usize = 8;

/// `τ = π/N₀` with `N₀ = √(Σ α_i²)`.
pub fn transfer_time(profile: &CouplingProfile) -> f64 {
    PI / profile.collective_norm()
}

/// Couplings of `|↓⟩|1⟩` in the closed three-state problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeStateParams {
    /// `γ = Σ a_i α_i`, coupling of the defect to `|↑⟩|0⟩`.
    pub gamma: f64,
    /// `β = √(N₀² − γ²)`, weight of the orthogonal one-excitation state.
    pub beta: f64,
    pub omega: f64,
    pub alpha_mean: f64,
    /// `δ = √((ᾱ/2)² + Ω²)`.
    pub delta: f64,
}

impl ThreeStateParams {
    pub fn new(profile: &CouplingProfile, defect: &[f64]) -> Result<Self> {
        if defect.len() != profile.len() {
            return invalid("defect and profile lengths differ");
        }
        let gamma: f64 = defect.iter().zip(profile.values()).map(|(a, g)| a * g).sum();
        let omega = profile.collective_norm();
        let beta = (omega * omega - gamma * gamma).max(0.0).sqrt();
        let alpha_mean = profile.mean();
        let delta = ((alpha_mean / 2.0).powi(2) + omega * omega).sqrt();
        Ok(Self { gamma, beta, omega, alpha_mean, delta })
    }

    /// `(a₁, b₁, c₁)`: amplitudes of `|↓⟩|1⟩`, `|↑⟩|0⟩` and `|↓⟩|1⊥⟩`.
    pub fn amplitudes(&self, t: f64) -> (C64, C64, C64) {
        let Self { gamma, beta, omega, alpha_mean: ab, delta } = *self;
        let i = C64::new(0.0, 1.0);
        let e4 = C64::from_polar(1.0, ab * t / 4.0);
        let (s, c) = (delta * t / 2.0).sin_cos();
        let bracket = delta * c + i * (ab / 2.0) * s - delta * e4;
        let common = e4 / (omega * omega * delta) * bracket;
        let a1 = C64::from_polar(1.0, ab * t / 2.0) + common * gamma * gamma;
        let c1 = common * gamma * beta;
        let b1 = -i * (gamma / delta) * e4 * s;
        (a1, b1, c1)
    }
}

/// Closed-form evolution of `|↓⟩ ⊗ Σ a_j|1_j⟩`.
///
/// Columns: real and imaginary parts of `a1`, `b1`, `c1`, then `P_down` and
/// `tangle`.
pub fn analytic_three_state(profile: &CouplingProfile, defect: &DefectDistribution, times: &[f64]) -> Result<TimeSeries> {
    let p = ThreeStateParams::new(profile, &defect.amplitudes(profile.len())?)?;
    let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(times.len()); 8];
    for &t in times {
        let (a, b, c) = p.amplitudes(t);
        let p_down = a.norm_sqr() + c.norm_sqr();
        let p_up = b.norm_sqr();
        let vals = [a.re, a.im, b.re, b.im, c.re, c.im, p_down, 4.0 * p_up * p_down];
        for (col, v) in cols.iter_mut().zip(vals) {
            col.push(v);
        }
    }
    let mut s = TimeSeries::new(times.to_vec())?;
    let names = ["a1_re", "a1_im", "b1_re", "b1_im", "c1_re", "c1_im", "P_down", "tangle"];
    for (name, col) in names.into_iter().zip(cols) {
        s.push(name, col)?;
    }
    Ok(s)
}

/// `|spin⟩ ⊗ |ket⟩` evolved inside the two chain columns it couples to.
#[derive(Debug, Clone)]
pub struct SpinBranch {
    basis: EffectiveBasis,
    h: EffectiveHamiltonian,
    evo: BlockEvolution,
    weight: f64,
}

impl SpinBranch {
    pub fn new(profile: &CouplingProfile, spin: usize, ket: &SparseKet, max_row: usize) -> Result<Self> {
        let n = profile.len();
        let m = ket.n_excited();
        let (lo, hi) = if spin == SPIN_UP { (m, (m + 1).min(n)) } else { (m.saturating_sub(1), m) };
        let basis = build_chain(profile, Model::CentralSpin, ket, lo, hi, max_row)?;
        let h = assemble_effective_hamiltonian(&basis, Factor::ElectronSpin)?;
        let seed = h.index_of(spin, basis.seed_index()).expect("seed label present");
        let mut psi0 = CVector::zeros(h.dim());
        psi0[seed] = C64::new(1.0, 0.0);
        let evo = h.evolution(&psi0)?;
        Ok(Self { basis, h, evo, weight: ket.norm() })
    }

    pub fn basis(&self) -> &EffectiveBasis {
        &self.basis
    }

    pub fn hamiltonian(&self) -> &EffectiveHamiltonian {
        &self.h
    }

    /// Amplitudes over the product labels at time `t`, carrying the norm of
    /// the initial ket.
    pub fn state_at(&self, t: f64) -> CVector {
        self.evo.state_at(t) * C64::new(self.weight, 0.0)
    }

    /// Per-spin amplitude vectors over the chain states.
    pub fn split(&self, psi: &CVector) -> [CVector; 2] {
        let mut out = [CVector::zeros(self.basis.len()), CVector::zeros(self.basis.len())];
        for (l, a) in self.h.labels().iter().zip(psi.iter()) {
            out[l.factor][l.chain] = *a;
        }
        out
    }

    /// The state as `(spin, nuclear ket)` pieces, one per occupied
    /// spin/column pair.
    pub fn components(&self, psi: &CVector) -> Vec<(usize, SparseKet)> {
        let mut out = Vec::new();
        let split = self.split(psi);
        for (spin, amps) in split.iter().enumerate() {
            for col in self.basis.min_col()..=self.basis.max_col() {
                if let Some(k) = self.basis.expand_column(col, amps.as_slice()) {
                    if k.nnz() > 0 {
                        out.push((spin, k));
                    }
                }
            }
        }
        out
    }
}

/// Reduced electron state of a pure state given as `(spin, nuclear ket)`
/// pieces; pieces in different columns are orthogonal.
pub fn reduced_from_components(parts: &[(usize, SparseKet)]) -> CMatrix {
    let mut rho = CMatrix::zeros(2, 2);
    for (s, p) in parts {
        for (s2, q) in parts {
            if p.n_excited() == q.n_excited() {
                rho[(*s, *s2)] += q.dot(p);
            }
        }
    }
    rho
}

/// A superposition `Σ_X c_X |branch_X⟩` with the chain overlaps between
/// branches precomputed, so the electron state costs no nuclear-space work
/// per time step.
#[derive(Debug, Clone)]
pub struct BranchSet {
    branches: Vec<(C64, SpinBranch)>,
    // gram[x][y][(l, k)] = ⟨v^y_l | v^x_k⟩
    gram: Vec<Vec<CMatrix>>,
}

impl BranchSet {
    pub fn new(branches: Vec<(C64, SpinBranch)>) -> Self {
        let gram = branches
            .iter()
            .map(|(_, x)| {
                branches
                    .iter()
                    .map(|(_, y)| {
                        let (bx, by) = (x.basis(), y.basis());
                        let mut g = CMatrix::zeros(by.len(), bx.len());
                        for (k, (lk, vk)) in bx.labels().iter().zip(bx.vectors()).enumerate() {
                            for (l, (ll, vl)) in by.labels().iter().zip(by.vectors()).enumerate() {
                                if lk.col == ll.col {
                                    g[(l, k)] = vl.dot(vk);
                                }
                            }
                        }
                        g
                    })
                    .collect()
            })
            .collect();
        Self { branches, gram }
    }

    pub fn branches(&self) -> &[(C64, SpinBranch)] {
        &self.branches
    }

    pub fn reduced_electron(&self, t: f64) -> CMatrix {
        let split: Vec<[CVector; 2]> =
            self.branches.iter().map(|(c, b)| { let s = b.split(&b.state_at(t)); [&s[0] * *c, &s[1] * *c] }).collect();
        let mut rho = CMatrix::zeros(2, 2);
        for (x, ax) in split.iter().enumerate() {
            for (y, ay) in split.iter().enumerate() {
                let g = &self.gram[x][y];
                for s in 0..2 {
                    let ga = g * &ax[s];
                    for s2 in 0..2 {
                        rho[(s, s2)] += ay[s2].dotc(&ga);
                    }
                }
            }
        }
        rho
    }
}

/// `u|↑⟩ + v|↓⟩`, normalized.
pub(crate) fn check_electron(u: C64, v: C64) -> Result<()> {
    let n = u.norm_sqr() + v.norm_sqr();
    if !((n - 1.0).abs() <= 1e-10) {
        return invalid(format!("electron state has norm² {n}, expected 1"));
    }
    Ok(())
}

/// Which propagation backend a defect run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectEngine {
    Effective { max_row: usize },
    Exact,
}

fn electron_columns(obs: &[ObservableSpec], rho: impl Fn(usize) -> CMatrix, n_times: usize) -> Result<Vec<Vec<f64>>> {
    let mut cols = vec![Vec::with_capacity(n_times); obs.len()];
    for i in 0..n_times {
        let r = rho(i);
        for (o, col) in obs.iter().zip(cols.iter_mut()) {
            col.push(match o {
                ObservableSpec::ElectronPopulation { spin: Spin::Up } => r[(SPIN_UP, SPIN_UP)].re,
                ObservableSpec::ElectronPopulation { spin: Spin::Down } => r[(SPIN_DOWN, SPIN_DOWN)].re,
                ObservableSpec::Tangle => tangle_from_reduced(&r),
                _ => f64::NAN,
            });
        }
    }
    Ok(cols)
}

/// The electron `u|↑⟩ + v|↓⟩` against a one-defect nuclear state.
#[derive(Debug, Clone)]
pub struct DefectRun {
    pub series: TimeSeries,
    /// Effective-space dimension, or the exact sector dimensions summed.
    pub dim: usize,
    /// Chain basis seeded from the `|↑⟩` (or sole) branch, for diagnostics.
    pub basis: Option<EffectiveBasis>,
}

/// Evolves `(u|↑⟩ + v|↓⟩) ⊗ Σ a_j|1_j⟩` and records `observables`.
///
/// Chain-state populations need a single spin branch; they are resolved
/// against the chain grown from the initial state (with the same `max_row`
/// for the exact engine).
pub fn run_qd_defect(
    profile: &CouplingProfile,
    defect: &DefectDistribution,
    electron: (C64, C64),
    engine: DefectEngine,
    observables: &[ObservableSpec],
    times: &[f64],
    chain_rows: usize,
) -> Result<DefectRun> {
    let (u, v) = electron;
    check_electron(u, v)?;
    let ket = defect.ket(profile.len())?;
    let spins: Vec<(usize, C64)> = [(SPIN_UP, u), (SPIN_DOWN, v)].into_iter().filter(|(_, c)| c.norm() > 0.0).collect();
    for o in observables {
        match o {
            ObservableSpec::StatePopulation { .. } if spins.len() != 1 => {
                return invalid("chain-state populations need the electron in |↑⟩ or |↓⟩")
            }
            ObservableSpec::StatePopulation { .. }
            | ObservableSpec::ElectronPopulation { .. }
            | ObservableSpec::Tangle => {}
            other => return invalid(format!("observable {} is not defined for central-spin runs", other.column_name())),
        }
    }
    let mut series = TimeSeries::new(times.to_vec())?;
    let names: Vec<String> = observables.iter().map(|o| o.column_name()).collect();

    match engine {
        DefectEngine::Effective { max_row } => {
            let branches = spins
                .iter()
                .map(|&(s, c)| Ok((c, SpinBranch::new(profile, s, &ket, max_row)?)))
                .collect::<Result<Vec<_>>>()?;
            let set = BranchSet::new(branches);
            let rhos: Vec<CMatrix> = times.iter().map(|&t| set.reduced_electron(t)).collect();
            let mut cols = electron_columns(observables, |i| rhos[i].clone(), times.len())?;
            let (c0, b0) = &set.branches()[0];
            for (o, col) in observables.iter().zip(cols.iter_mut()) {
                if let ObservableSpec::StatePopulation { labels, .. } = o {
                    let idx = chain_indices(b0.basis(), labels)?;
                    *col = times
                        .iter()
                        .map(|&t| {
                            let psi = b0.state_at(t) * *c0;
                            b0.hamiltonian()
                                .labels()
                                .iter()
                                .zip(psi.iter())
                                .filter(|(l, _)| idx.contains(&l.chain))
                                .map(|(_, a)| a.norm_sqr())
                                .sum()
                        })
                        .collect();
                }
            }
            for (name, col) in names.into_iter().zip(cols) {
                series.push(name, col)?;
            }
            let dim = set.branches().iter().map(|(_, b)| b.hamiltonian().dim()).sum();
            Ok(DefectRun { series, dim, basis: Some(set.branches()[0].1.basis().clone()) })
        }
        DefectEngine::Exact => {
            // ↑ with one defect lives in sector 2, ↓ in sector 1
            let mut runs = Vec::new();
            let mut dim = 0;
            for &(s, c) in &spins {
                let k = if s == SPIN_UP { 2 } else { 1 };
                let (sector, h) = assemble_qd_sector(profile, k, false)?;
                dim += sector.dim();
                let mut psi0 = CVector::zeros(sector.dim());
                for &(i, a) in ket.entries() {
                    let idx = sector.index(s, ket.sector().unrank_mask(i)).expect("defect inside the sector");
                    psi0[idx] = a;
                }
                let mut prop = Propagator::new(&h, &psi0)?;
                let states = times.iter().map(|&t| Ok(prop.state_at(t)? * c)).collect::<Result<Vec<_>>>()?;
                runs.push((sector, states));
            }
            let rho_at = |i: usize| -> CMatrix {
                let mut amps: BTreeMap<u64, [C64; 2]> = BTreeMap::new();
                for (sector, states) in &runs {
                    for (idx, a) in states[i].iter().enumerate() {
                        let (spin, mask) = sector.decode(idx);
                        amps.entry(mask).or_insert([C64::new(0.0, 0.0); 2])[spin] += a;
                    }
                }
                let mut r = CMatrix::zeros(2, 2);
                for pair in amps.values() {
                    for s in 0..2 {
                        for s2 in 0..2 {
                            r[(s, s2)] += pair[s] * pair[s2].conj();
                        }
                    }
                }
                r
            };
            let mut cols = electron_columns(observables, rho_at, times.len())?;
            let needs_chain = observables.iter().any(|o| matches!(o, ObservableSpec::StatePopulation { .. }));
            let basis = if needs_chain {
                let b = SpinBranch::new(profile, spins[0].0, &ket, chain_rows)?;
                Some(b.basis().clone())
            } else {
                None
            };
            for (o, col) in observables.iter().zip(cols.iter_mut()) {
                if let ObservableSpec::StatePopulation { labels, .. } = o {
                    let basis = basis.as_ref().expect("built above");
                    let idx = chain_indices(basis, labels)?;
                    let (sector, states) = &runs[0];
                    *col = states.iter().map(|psi| project_qd(basis, &idx, sector, psi)).collect();
                }
            }
            for (name, col) in names.into_iter().zip(cols) {
                series.push(name, col)?;
            }
            Ok(DefectRun { series, dim, basis })
        }
    }
}

pub(crate) fn chain_indices(basis: &EffectiveBasis, labels: &[crate::chain::ChainLabel]) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|l| basis.index_of(*l).ok_or_else(|| crate::Error::InvalidInput(format!("chain state r{}c{} not in the basis", l.row, l.col))))
        .collect()
}

/// `Σ_k |⟨spin_k, v_k|ψ⟩|²`; the electron spin of chain state `k` follows
/// from its column and the sector.
fn project_qd(basis: &EffectiveBasis, idx: &[usize], sector: &QdSector, psi: &CVector) -> f64 {
    idx.iter()
        .map(|&k| {
            let v = &basis.vectors()[k];
            let spin = if v.n_excited() + 1 == sector.k { SPIN_UP } else { SPIN_DOWN };
            let mut acc = C64::new(0.0, 0.0);
            for &(i, a) in v.entries() {
                if let Some(j) = sector.index(spin, v.sector().unrank_mask(i)) {
                    acc += a.conj() * psi[j];
                }
            }
            acc.norm_sqr()
        })
        .sum()
}
