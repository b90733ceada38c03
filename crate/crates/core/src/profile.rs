//! Per-particle coupling strengths.
//!
//! A [`CouplingProfile`] carries the real couplings `g_i` of the Tavis–Cummings
//! model or the hyperfine constants `α_i` of the central-spin model, together
//! with a record of how they were generated so runs can be fingerprinted.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Default dot cutoff radius in units of the envelope size `r0`.
pub const DEFAULT_DOT_RADIUS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// `g_j = g sin(jπ/(N+1))`, a standing-wave cavity mode.
    SineCavity,
    /// Gaussian electron envelope sampled at equal-volume radial shells of a
    /// spherical dot, normalized so the couplings sum to `A`.
    GaussianDot,
    /// Constant couplings with the same `Σ g²` as some reference profile.
    HomogeneousMatched,
    Explicit,
}

pub type ProfileParams = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingProfile {
    values: Vec<f64>,
    kind: ProfileKind,
    params: ProfileParams,
}

fn param(params: &ProfileParams, key: &str, kind: ProfileKind) -> Result<f64> {
    match params.get(key) {
        Some(v) if v.is_finite() => Ok(*v),
        Some(v) => invalid(format!("{kind:?}: parameter `{key}` is not finite ({v})")),
        None => invalid(format!("{kind:?}: missing parameter `{key}`")),
    }
}

/// Builds a coupling profile of the given kind for `n` particles.
///
/// Required parameters: `g` for [`ProfileKind::SineCavity`]; `A` and `r0` for
/// [`ProfileKind::GaussianDot`] (optional `R`, the dot radius, defaulting to
/// `2·r0`); `sum_sq` for [`ProfileKind::HomogeneousMatched`]. Explicit
/// profiles are built with [`CouplingProfile::explicit`].
pub fn make_profile(kind: ProfileKind, n: usize, params: &ProfileParams) -> Result<CouplingProfile> {
    if n == 0 {
        return invalid("a coupling profile needs at least one particle");
    }
    let mut recorded = params.clone();
    recorded.insert("N".into(), n as f64);
    let values = match kind {
        ProfileKind::SineCavity => {
            let g = param(params, "g", kind)?;
            (1..=n).map(|j| g * (j as f64 * PI / (n as f64 + 1.0)).sin()).collect()
        }
        ProfileKind::GaussianDot => {
            let a = param(params, "A", kind)?;
            let r0 = param(params, "r0", kind)?;
            if r0 <= 0.0 {
                return invalid("GaussianDot: r0 must be positive");
            }
            let radius = match params.get("R") {
                Some(_) => param(params, "R", kind)?,
                None => DEFAULT_DOT_RADIUS * r0,
            };
            if radius <= 0.0 {
                return invalid("GaussianDot: R must be positive");
            }
            recorded.insert("R".into(), radius);
            gaussian_dot(n, a, r0, radius)
        }
        ProfileKind::HomogeneousMatched => {
            let sum_sq = param(params, "sum_sq", kind)?;
            if sum_sq < 0.0 {
                return invalid("HomogeneousMatched: sum_sq must be non-negative");
            }
            vec![(sum_sq / n as f64).sqrt(); n]
        }
        ProfileKind::Explicit => {
            return invalid("explicit profiles are built from a value list, not parameters");
        }
    };
    CouplingProfile::new(values, kind, recorded)
}

/// Radii of `n` nuclei placed one per equal-volume shell of a ball of radius
/// `radius`, in increasing order.
pub fn shell_radii(n: usize, radius: f64) -> Vec<f64> {
    (1..=n)
        .map(|i| radius * ((i as f64 - 0.5) / n as f64).cbrt())
        .collect()
}

fn gaussian_dot(n: usize, a: f64, r0: f64, radius: f64) -> Vec<f64> {
    let weights: Vec<f64> = shell_radii(n, radius)
        .into_iter()
        .map(|r| (-(r * r) / (r0 * r0)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| a * w / total).collect()
}

impl CouplingProfile {
    fn new(values: Vec<f64>, kind: ProfileKind, params: ProfileParams) -> Result<Self> {
        if values.is_empty() {
            return invalid("a coupling profile needs at least one particle");
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return invalid(format!("couplings must be finite and non-negative, got {bad}"));
        }
        Ok(Self { values, kind, params })
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        let mut params = ProfileParams::new();
        params.insert("N".into(), values.len() as f64);
        Self::new(values, ProfileKind::Explicit, params)
    }

    /// The constant profile with the same `Σ g²`, so that both share the
    /// collective Rabi frequency `N₀`.
    pub fn matched_homogeneous(&self) -> CouplingProfile {
        let mut params = ProfileParams::new();
        params.insert("sum_sq".into(), self.sum_sq());
        make_profile(ProfileKind::HomogeneousMatched, self.len(), &params)
            .expect("a valid profile always has a valid matched partner")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn params(&self) -> &ProfileParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum_sq(&self) -> f64 {
        self.values.iter().map(|g| g * g).sum()
    }

    /// `N₀ = (Σ g²)^{1/2}`, the norm of the collective raising operator acting
    /// on the ground state.
    pub fn collective_norm(&self) -> f64 {
        self.sum_sq().sqrt()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn is_homogeneous(&self) -> bool {
        let first = self.values[0];
        self.values.iter().all(|v| (v - first).abs() <= 1e-14 * first.abs().max(1.0))
    }
}
