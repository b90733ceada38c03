//! JSON scenario files.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "name": "collapse-revival",
//!   "scenario": {
//!     "kind": "itc",
//!     "profile": { "kind": "sine_cavity", "n": 6, "params": { "g": 1.0 } },
//!     "nbar": 1.8,
//!     "field_dim": 7,
//!     "engine": { "kind": "effective", "max_row": 2 },
//!     "observables": [ { "kind": "state_population", "labels": [ { "row": 1, "col": 0 } ], "name": "P0" } ]
//!   },
//!   "time": { "start": 0.0, "end": 25.0, "points": 600 }
//! }
//! ```
//!
//! Complex amplitudes are written `[re, im]`. Central-spin time grids may be
//! given in units of the transfer time with `"unit": "transfer_time"`.

use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::observables::{ObservableSpec, Spin, BLOCH_POINTS};
use crate::profile::{make_profile, CouplingProfile, ProfileKind, ProfileParams};

use super::central::BRANCH_MAX_ROW;
use super::defect::DefectDistribution;
use super::itc::ItcEngine;
use super::series::{TimeGrid, DEFAULT_POINTS};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub scenario: Scenario,
    /// Required by every scenario except `qd_memory`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeSpec>,
    /// Default CSV path when none is given on the command line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeUnit {
    #[default]
    Absolute,
    /// Multiples of `τ = π/N₀`.
    TransferTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    #[serde(default)]
    pub start: f64,
    pub end: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default)]
    pub unit: TimeUnit,
}

fn default_points() -> usize {
    DEFAULT_POINTS
}

impl TimeSpec {
    pub fn grid(&self, tau: Option<f64>) -> Result<TimeGrid> {
        let scale = match (self.unit, tau) {
            (TimeUnit::Absolute, _) => 1.0,
            (TimeUnit::TransferTime, Some(t)) => t,
            (TimeUnit::TransferTime, None) => return invalid("transfer-time units need a central-spin scenario"),
        };
        TimeGrid::new(self.start * scale, self.end * scale, self.points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub kind: ProfileKind,
    pub n: usize,
    #[serde(default)]
    pub params: ProfileParams,
    /// Couplings of an `explicit` profile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// Replace the couplings by constant ones with the same `Σ g²`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub homogeneous: bool,
}

impl ProfileSpec {
    pub fn build(&self) -> Result<CouplingProfile> {
        let p = match (self.kind, &self.values) {
            (ProfileKind::Explicit, Some(v)) => {
                if v.len() != self.n {
                    return invalid(format!("explicit profile has {} values for n = {}", v.len(), self.n));
                }
                CouplingProfile::explicit(v.clone())?
            }
            (ProfileKind::Explicit, None) => return invalid("an explicit profile needs `values`"),
            (_, Some(_)) => return invalid("`values` only applies to explicit profiles"),
            (kind, None) => make_profile(kind, self.n, &self.params)?,
        };
        Ok(if self.homogeneous { p.matched_homogeneous() } else { p })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectronSpec {
    pub u: C64,
    pub v: C64,
}

impl ElectronSpec {
    pub fn up() -> Self {
        Self { u: C64::new(1.0, 0.0), v: C64::new(0.0, 0.0) }
    }

    /// `(|↑⟩ + |↓⟩)/√2`.
    pub fn plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { u: C64::new(s, 0.0), v: C64::new(s, 0.0) }
    }

    pub fn pair(&self) -> (C64, C64) {
        (self.u, self.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DefectEngineSpec {
    Effective { max_row: usize },
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItcScenario {
    pub profile: ProfileSpec,
    pub nbar: f64,
    /// Fock cutoff; chosen from the coherent-state tail when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_dim: Option<usize>,
    pub engine: ItcEngine,
    #[serde(default = "default_itc_observables")]
    pub observables: Vec<ObservableSpec>,
    /// Also run the matched homogeneous profile, suffixing its columns `_hom`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub homogeneous_reference: bool,
}

fn default_itc_observables() -> Vec<ObservableSpec> {
    vec![ObservableSpec::ground()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QdDefectScenario {
    pub profile: ProfileSpec,
    pub defect: DefectDistribution,
    #[serde(default = "ElectronSpec::up")]
    pub electron: ElectronSpec,
    pub engine: DefectEngineSpec,
    #[serde(default = "default_qd_observables")]
    pub observables: Vec<ObservableSpec>,
}

fn default_qd_observables() -> Vec<ObservableSpec> {
    vec![ObservableSpec::ElectronPopulation { spin: Spin::Up }]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QdThreeStateScenario {
    pub profile: ProfileSpec,
    pub defect: DefectDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QdMemoryScenario {
    pub profile: ProfileSpec,
    /// Nuclei start in `|0⟩` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect: Option<DefectDistribution>,
    /// Storage time; `π/N₀` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default = "default_bloch")]
    pub bloch_points: usize,
    #[serde(default = "default_branch_rows")]
    pub max_row: usize,
}

fn default_bloch() -> usize {
    BLOCH_POINTS
}

fn default_branch_rows() -> usize {
    BRANCH_MAX_ROW
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QdMixedScenario {
    pub profile: ProfileSpec,
    /// Weights `a_j²` of this defect's amplitudes…
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect: Option<DefectDistribution>,
    /// …or explicit weights summing to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default = "ElectronSpec::plus")]
    pub electron: ElectronSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QdThermalScenario {
    pub profile: ProfileSpec,
    pub k_mean: f64,
    #[serde(default = "ElectronSpec::plus")]
    pub electron: ElectronSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario {
    Itc(ItcScenario),
    QdDefect(QdDefectScenario),
    QdThreeState(QdThreeStateScenario),
    QdMemory(QdMemoryScenario),
    QdMixed(QdMixedScenario),
    QdThermal(QdThermalScenario),
}

impl Scenario {
    pub fn profile(&self) -> &ProfileSpec {
        match self {
            Scenario::Itc(s) => &s.profile,
            Scenario::QdDefect(s) => &s.profile,
            Scenario::QdThreeState(s) => &s.profile,
            Scenario::QdMemory(s) => &s.profile,
            Scenario::QdMixed(s) => &s.profile,
            Scenario::QdThermal(s) => &s.profile,
        }
    }

    fn profile_mut(&mut self) -> &mut ProfileSpec {
        match self {
            Scenario::Itc(s) => &mut s.profile,
            Scenario::QdDefect(s) => &mut s.profile,
            Scenario::QdThreeState(s) => &mut s.profile,
            Scenario::QdMemory(s) => &mut s.profile,
            Scenario::QdMixed(s) => &mut s.profile,
            Scenario::QdThermal(s) => &mut s.profile,
        }
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            Scenario::Itc(_) => "itc",
            _ => "central_spin",
        }
    }

    fn defect_mut(&mut self) -> Option<&mut DefectDistribution> {
        match self {
            Scenario::QdDefect(s) => Some(&mut s.defect),
            Scenario::QdThreeState(s) => Some(&mut s.defect),
            Scenario::QdMemory(s) => s.defect.as_mut(),
            Scenario::QdMixed(s) => s.defect.as_mut(),
            _ => None,
        }
    }
}

/// Parameters a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "j0")]
    J0,
    #[serde(rename = "Gamma")]
    Gamma,
    #[serde(rename = "N")]
    N,
    #[serde(rename = "k_mean")]
    KMean,
    #[serde(rename = "max_row")]
    MaxRow,
}

impl SweepAxis {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "j0" => Ok(SweepAxis::J0),
            "Gamma" | "gamma" => Ok(SweepAxis::Gamma),
            "N" | "n" => Ok(SweepAxis::N),
            "k_mean" => Ok(SweepAxis::KMean),
            "max_row" => Ok(SweepAxis::MaxRow),
            other => invalid(format!("unsupported sweep axis `{other}` (expected j0, Gamma, N, k_mean or max_row)")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::J0 => "j0",
            SweepAxis::Gamma => "Gamma",
            SweepAxis::N => "N",
            SweepAxis::KMean => "k_mean",
            SweepAxis::MaxRow => "max_row",
        }
    }

    fn is_integer(&self) -> bool {
        matches!(self, SweepAxis::J0 | SweepAxis::N | SweepAxis::MaxRow)
    }
}

/// Parses sweep values; `N`, `N/4`, `3N/4` are taken relative to the
/// configured particle count.
pub fn parse_values(list: &str, n: usize) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for raw in list.split(',') {
        let tok = raw.trim();
        if tok.is_empty() {
            return invalid(format!("empty entry in value list `{list}`"));
        }
        let v = if let Some(pos) = tok.find('N') {
            let coef = match &tok[..pos] {
                "" => 1.0,
                c => c.trim_end_matches('*').parse::<f64>().map_err(|_| Error::InvalidInput(format!("bad value `{tok}`")))?,
            };
            let div = match &tok[pos + 1..] {
                "" => 1.0,
                d => d
                    .strip_prefix('/')
                    .and_then(|x| x.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("bad value `{tok}`")))?,
            };
            coef * n as f64 / div
        } else {
            tok.parse::<f64>().map_err(|_| Error::InvalidInput(format!("bad value `{tok}`")))?
        };
        if !v.is_finite() {
            return invalid(format!("value `{tok}` is not finite"));
        }
        out.push(v);
    }
    Ok(out)
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Cheap consistency checks that do not build any basis.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return invalid(format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", self.schema_version));
        }
        let profile = self.scenario.profile().build()?;
        let n = profile.len();
        let needs_time = !matches!(self.scenario, Scenario::QdMemory(_));
        match (&self.time, needs_time) {
            (None, true) => return invalid("this scenario needs a `time` grid"),
            (Some(t), _) => {
                let tau = match self.scenario {
                    Scenario::Itc(_) => None,
                    _ => Some(super::central::transfer_time(&profile)),
                };
                t.grid(tau)?;
            }
            _ => {}
        }
        match &self.scenario {
            Scenario::Itc(s) => {
                super::itc::field_dim_for(s.nbar, s.field_dim)?;
                if let ItcEngine::Effective { max_row: 0, .. } = s.engine {
                    return invalid("max_row must be at least 1");
                }
                if s.observables.is_empty() {
                    return invalid("no observables requested");
                }
            }
            Scenario::QdDefect(s) => {
                s.defect.amplitudes(n)?;
                super::central::check_electron(s.electron.u, s.electron.v)?;
                if let DefectEngineSpec::Effective { max_row: 0 } = s.engine {
                    return invalid("max_row must be at least 1");
                }
                if s.observables.is_empty() {
                    return invalid("no observables requested");
                }
            }
            Scenario::QdThreeState(s) => {
                s.defect.amplitudes(n)?;
            }
            Scenario::QdMemory(s) => {
                if let Some(d) = &s.defect {
                    d.amplitudes(n)?;
                }
                if let Some(t) = s.tau {
                    if !(t > 0.0 && t.is_finite()) {
                        return invalid("storage time tau must be positive");
                    }
                }
                if s.bloch_points < 6 {
                    return invalid("bloch_points must be at least 6");
                }
                if s.max_row == 0 {
                    return invalid("max_row must be at least 1");
                }
            }
            Scenario::QdMixed(s) => {
                super::central::check_electron(s.electron.u, s.electron.v)?;
                match (&s.defect, &s.weights) {
                    (Some(d), None) => {
                        d.amplitudes(n)?;
                    }
                    (None, Some(w)) => super::mixed::check_weights(w, n)?,
                    _ => return invalid("a mixed scenario needs exactly one of `defect` or `weights`"),
                }
            }
            Scenario::QdThermal(s) => {
                super::central::check_electron(s.electron.u, s.electron.v)?;
                super::mixed::check_k_mean(s.k_mean)?;
            }
        }
        Ok(())
    }

    pub fn with_time_points(mut self, points: usize) -> Result<Self> {
        match &mut self.time {
            Some(t) => t.points = points,
            None => return invalid("this scenario has no time grid"),
        }
        self.validate()?;
        Ok(self)
    }

    /// A copy with one parameter replaced.
    pub fn with_axis(&self, axis: SweepAxis, value: f64) -> Result<Self> {
        if axis.is_integer() && (value.fract() != 0.0 || value < 0.0) {
            return invalid(format!("{} takes non-negative integer values, got {value}", axis.name()));
        }
        let mut cfg = self.clone();
        let sc = &mut cfg.scenario;
        match axis {
            SweepAxis::J0 => {
                let d = sc.defect_mut().ok_or_else(|| Error::InvalidInput("this scenario has no defect to move".into()))?;
                *d = d.with_j0(value as usize)?;
            }
            SweepAxis::Gamma => {
                let d = sc.defect_mut().ok_or_else(|| Error::InvalidInput("this scenario has no defect width".into()))?;
                *d = d.with_gamma(value)?;
            }
            SweepAxis::N => {
                let p = sc.profile_mut();
                if p.values.is_some() {
                    return invalid("cannot resize an explicit profile");
                }
                p.n = value as usize;
            }
            SweepAxis::KMean => match sc {
                Scenario::QdThermal(s) => s.k_mean = value,
                _ => return invalid("k_mean applies to thermal scenarios only"),
            },
            SweepAxis::MaxRow => match sc {
                Scenario::Itc(ItcScenario { engine: ItcEngine::Effective { max_row, .. }, .. })
                | Scenario::QdDefect(QdDefectScenario { engine: DefectEngineSpec::Effective { max_row }, .. })
                | Scenario::QdMemory(QdMemoryScenario { max_row, .. }) => *max_row = value as usize,
                _ => return invalid("max_row applies to effective-engine scenarios only"),
            },
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
