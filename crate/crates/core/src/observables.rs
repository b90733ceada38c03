//! Measured quantities.
//!
//! Functions here take already-reduced objects (amplitude vectors, reduced
//! density matrices, sampled series) so that the effective and exact engines
//! share them.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::chain::ChainLabel;
use crate::error::{invalid, Result};
use crate::linalg::{CMatrix, CVector, DensityMatrixSmall};

/// Default number of Bloch-sphere sample points.
pub const BLOCH_POINTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spin {
    Up,
    Down,
}

/// What to record at each time step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObservableSpec {
    /// Summed population of the listed chain states, over every factor state.
    StatePopulation {
        labels: Vec<ChainLabel>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
    RowPopulation { rows: Vec<usize> },
    QuadratureVariance,
    Tangle,
    ElectronPopulation { spin: Spin },
    Fidelity,
    Contrast,
}

impl ObservableSpec {
    /// `P0`, the population of the collective ground state.
    pub fn ground() -> Self {
        ObservableSpec::StatePopulation { labels: vec![ChainLabel { row: 1, col: 0 }], name: Some("P0".into()) }
    }

    /// CSV column name.
    pub fn column_name(&self) -> String {
        match self {
            ObservableSpec::StatePopulation { name: Some(n), .. } => n.clone(),
            ObservableSpec::StatePopulation { labels, name: None } => {
                let parts: Vec<String> = labels.iter().map(|l| format!("r{}c{}", l.row, l.col)).collect();
                format!("P_{}", parts.join("_"))
            }
            ObservableSpec::RowPopulation { rows } => {
                let parts: Vec<String> = rows.iter().map(|r| r.to_string()).collect();
                format!("P_rows_{}", parts.join("_"))
            }
            ObservableSpec::QuadratureVariance => "dX1_sq".into(),
            ObservableSpec::Tangle => "tangle".into(),
            ObservableSpec::ElectronPopulation { spin: Spin::Up } => "P_up".into(),
            ObservableSpec::ElectronPopulation { spin: Spin::Down } => "P_down".into(),
            ObservableSpec::Fidelity => "fidelity".into(),
            ObservableSpec::Contrast => "contrast".into(),
        }
    }

    /// Whether the value is recorded per time step (as opposed to a scalar
    /// summary of a whole run).
    pub fn is_time_resolved(&self) -> bool {
        !matches!(self, ObservableSpec::Fidelity | ObservableSpec::Contrast)
    }
}

/// `Σ_{i ∈ indices} |ψ_i|²`.
pub fn population(psi: &CVector, indices: impl IntoIterator<Item = usize>) -> f64 {
    indices.into_iter().map(|i| psi[i].norm_sqr()).sum()
}

/// `(ΔX₁)²` with `X₁ = (a + a†)/2` from the field density matrix `ρ[n, n']`.
pub fn quadrature_variance(rho_field: &CMatrix) -> f64 {
    let d = rho_field.nrows();
    let mut a = C64::new(0.0, 0.0);
    let mut a2 = C64::new(0.0, 0.0);
    let mut n_mean = 0.0;
    for n in 0..d {
        n_mean += n as f64 * rho_field[(n, n)].re;
        if n + 1 < d {
            a += rho_field[(n, n + 1)] * ((n + 1) as f64).sqrt();
        }
        if n + 2 < d {
            a2 += rho_field[(n, n + 2)] * (((n + 1) * (n + 2)) as f64).sqrt();
        }
    }
    let x2 = (2.0 * a2.re + 2.0 * n_mean + 1.0) / 4.0;
    x2 - a.re * a.re
}

/// `ρ[n, n'] = Σ_k ψ(n, k) ψ*(n', k)` for amplitudes grouped by an orthonormal
/// second factor `k`.
pub fn reduce_first_factor(d: usize, amplitudes: impl IntoIterator<Item = (usize, usize, C64)>) -> CMatrix {
    let mut by_k: std::collections::BTreeMap<usize, Vec<(usize, C64)>> = Default::default();
    for (n, k, a) in amplitudes {
        by_k.entry(k).or_default().push((n, a));
    }
    let mut rho = CMatrix::zeros(d, d);
    for entries in by_k.values() {
        for &(n, a) in entries {
            for &(m, b) in entries {
                rho[(n, m)] += a * b.conj();
            }
        }
    }
    rho
}

/// `2(1 − tr ρ_e²)` for the reduced state of one qubit of a pure joint state.
pub fn tangle_from_reduced(rho_e: &CMatrix) -> f64 {
    let purity: f64 = rho_e.iter().map(|z| z.norm_sqr()).sum();
    2.0 * (1.0 - purity)
}

/// Tangle between a qubit (first factor) and the rest, from the joint density
/// matrix over `2 × rest` states. Only pure joint states are accepted.
pub fn tangle(rho_joint: &DensityMatrixSmall) -> Result<f64> {
    let d = rho_joint.dim();
    if d % 2 != 0 {
        return invalid("joint state dimension must be even for a qubit partition");
    }
    if (rho_joint.purity() - 1.0).abs() > 1e-10 {
        return invalid("the tangle is defined here for pure joint states only");
    }
    let rest = d / 2;
    let m = rho_joint.matrix();
    let mut rho_e = CMatrix::zeros(2, 2);
    for s in 0..2 {
        for t in 0..2 {
            for k in 0..rest {
                rho_e[(s, t)] += m[(s * rest + k, t * rest + k)];
            }
        }
    }
    Ok(tangle_from_reduced(&rho_e))
}

/// `F = ⟨ψ_i|ρ_f|ψ_i⟩`.
pub fn fidelity(rho_f: &DensityMatrixSmall, psi_i: &CVector) -> Result<f64> {
    rho_f.expectation_pure(psi_i)
}

/// Fibonacci-lattice points on the Bloch sphere as `(u, v)` with the state
/// `u|↑⟩ + v|↓⟩`.
pub fn bloch_points(m: usize) -> Vec<(C64, C64)> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..m)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / m as f64;
            let theta = z.clamp(-1.0, 1.0).acos();
            let phi = golden * k as f64;
            (C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi))
        })
        .collect()
}

/// Mean of `f(u, v)` over [`bloch_points`].
pub fn bloch_average(mut f: impl FnMut(C64, C64) -> f64, m: usize) -> Result<f64> {
    if m < 6 {
        return invalid(format!("Bloch averaging needs at least 6 points, got {m}"));
    }
    let pts = bloch_points(m);
    Ok(pts.into_iter().map(|(u, v)| f(u, v)).sum::<f64>() / m as f64)
}

/// Vertex of the parabola through three equally spaced samples.
fn refine(t: &[f64], y: &[f64], i: usize) -> (f64, f64) {
    let (y0, y1, y2) = (y[i - 1], y[i], y[i + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    if denom == 0.0 {
        return (t[i], y1);
    }
    let s = (0.5 * (y0 - y2) / denom).clamp(-1.0, 1.0);
    let h = 0.5 * (t[i + 1] - t[i - 1]);
    (t[i] + s * h, y1 - 0.25 * (y0 - y2) * s)
}

/// Peak-to-peak swing over the first oscillation period.
///
/// The period is twice the spacing of the first two interior extrema, each
/// located by parabolic refinement.
pub fn rabi_contrast(times: &[f64], values: &[f64]) -> Result<f64> {
    if times.len() != values.len() || times.len() < 5 {
        return invalid("contrast needs matching time and value arrays of at least 5 points");
    }
    let range = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - values.iter().cloned().fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * range.max(1e-300);
    if !(range > 1e-12) {
        return invalid("no oscillation detected");
    }
    let mut extrema = Vec::new();
    for i in 1..values.len() - 1 {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        let is_max = b > a + tol && b >= c;
        let is_min = b < a - tol && b <= c;
        if is_max || is_min {
            extrema.push(refine(times, values, i));
            if extrema.len() == 2 {
                break;
            }
        }
    }
    if extrema.len() < 2 {
        return invalid("no oscillation detected");
    }
    let period = 2.0 * (extrema[1].0 - extrema[0].0);
    let end = times[0] + period;
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for (t, v) in times.iter().zip(values) {
        if *t <= end {
            hi = hi.max(*v);
            lo = lo.min(*v);
        }
    }
    for (t, v) in &extrema {
        if *t <= end {
            hi = hi.max(*v);
            lo = lo.min(*v);
        }
    }
    Ok(hi - lo)
}
