//! Dispatch from a [`ScenarioConfig`] to the engines: single runs,
//! exact-vs-effective comparisons and parameter sweeps.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{DiscardReason, EffectiveBasis};
use crate::error::{invalid, Result};
use crate::observables::{rabi_contrast, ObservableSpec};

use super::central::{analytic_three_state, run_qd_defect, transfer_time, DefectEngine};
use super::config::{DefectEngineSpec, Scenario, ScenarioConfig, SweepAxis};
use super::itc::{run_itc, ItcEngine};
use super::memory::MemoryChannel;
use super::mixed::{run_qd_mixed, run_qd_thermal};
use super::series::{csv_field, fmt_f64, TimeSeries};

/// What was actually built, for the run manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fingerprint {
    pub scenario: &'static str,
    pub model: &'static str,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_dim: Option<usize>,
    /// Hilbert-space dimensions by engine.
    pub dims: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transfer_time: Option<f64>,
}

/// Candidates the chain builder discarded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualSummary {
    pub basis_size: usize,
    pub dependent: usize,
    pub truncated: usize,
    /// Largest relative residual cut off by `max_row`; 0 when nothing was.
    pub max_truncated_relative: f64,
    pub orthonormality_defect: f64,
}

impl ResidualSummary {
    pub fn of(basis: &EffectiveBasis) -> Self {
        let log = basis.residual_log();
        let count = |r| log.iter().filter(|x| x.reason == r).count();
        Self {
            basis_size: basis.len(),
            dependent: count(DiscardReason::Dependent),
            truncated: count(DiscardReason::Truncated),
            max_truncated_relative: log
                .iter()
                .filter(|x| x.reason == DiscardReason::Truncated)
                .map(|x| x.relative)
                .fold(0.0, f64::max),
            orthonormality_defect: basis.orthonormality_defect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub series: TimeSeries,
    pub fingerprint: Fingerprint,
    pub residuals: Option<ResidualSummary>,
}

fn scenario_name(s: &Scenario) -> &'static str {
    match s {
        Scenario::Itc(_) => "itc",
        Scenario::QdDefect(_) => "qd_defect",
        Scenario::QdThreeState(_) => "qd_three_state",
        Scenario::QdMemory(_) => "qd_memory",
        Scenario::QdMixed(_) => "qd_mixed",
        Scenario::QdThermal(_) => "qd_thermal",
    }
}

/// Runs the scenario as configured.
pub fn execute(cfg: &ScenarioConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let profile = cfg.scenario.profile().build()?;
    let n = profile.len();
    let tau = match cfg.scenario {
        Scenario::Itc(_) => None,
        _ => Some(transfer_time(&profile)),
    };
    let times = match &cfg.time {
        Some(t) => t.grid(tau)?.times(),
        None => Vec::new(),
    };
    let mut fp = Fingerprint {
        scenario: scenario_name(&cfg.scenario),
        model: cfg.scenario.model_name(),
        n,
        max_row: None,
        field_dim: None,
        dims: BTreeMap::new(),
        transfer_time: tau,
    };
    let mut residuals = None;
    let series = match &cfg.scenario {
        Scenario::Itc(s) => {
            let run = run_itc(&profile, s.nbar, s.field_dim, s.engine, &s.observables, &times)?;
            fp.field_dim = Some(run.field_dim);
            match s.engine {
                ItcEngine::Effective { max_row, .. } => {
                    fp.max_row = Some(max_row);
                    fp.dims.insert("effective".into(), run.dim);
                    residuals = run.basis.as_ref().map(ResidualSummary::of);
                }
                ItcEngine::Exact => {
                    fp.dims.insert("exact".into(), run.dim);
                }
            }
            let mut series = run.series;
            if s.homogeneous_reference {
                let hom = run_itc(&profile.matched_homogeneous(), s.nbar, s.field_dim, s.engine, &s.observables, &times)?;
                fp.dims.insert("homogeneous_reference".into(), hom.dim);
                for (name, col) in hom.series.columns() {
                    series.push(format!("{name}_hom"), col.clone())?;
                }
            }
            series
        }
        Scenario::QdDefect(s) => {
            let (engine, rows) = match s.engine {
                DefectEngineSpec::Effective { max_row } => (DefectEngine::Effective { max_row }, max_row),
                DefectEngineSpec::Exact => (DefectEngine::Exact, chain_rows(&s.observables)),
            };
            let run = run_qd_defect(&profile, &s.defect, s.electron.pair(), engine, &s.observables, &times, rows)?;
            fp.max_row = Some(rows);
            let key = if matches!(engine, DefectEngine::Exact) { "exact" } else { "effective" };
            fp.dims.insert(key.into(), run.dim);
            residuals = run.basis.as_ref().map(ResidualSummary::of);
            run.series
        }
        Scenario::QdThreeState(s) => {
            fp.dims.insert("analytic".into(), 3);
            analytic_three_state(&profile, &s.defect, &times)?
        }
        Scenario::QdMemory(s) => {
            let storage = s.tau.unwrap_or_else(|| transfer_time(&profile));
            fp.max_row = Some(s.max_row);
            let reference = MemoryChannel::new(&profile, None, storage, s.max_row)?;
            let phase = reference.coherence_phase();
            let channel = match &s.defect {
                None => reference,
                Some(d) => MemoryChannel::new(&profile, Some(d), storage, s.max_row)?,
            };
            let raw = channel.clone().with_phase(0.0).average_fidelity(s.bloch_points)?;
            let corrected = channel.with_phase(phase).average_fidelity(s.bloch_points)?;
            let mut series = TimeSeries::new(vec![storage])?;
            series.push("fidelity", vec![corrected])?;
            series.push("fidelity_uncorrected", vec![raw])?;
            series.push("phase", vec![phase])?;
            series
        }
        Scenario::QdMixed(s) => {
            let weights = match (&s.defect, &s.weights) {
                (Some(d), _) => d.weights(n)?,
                (None, Some(w)) => w.clone(),
                (None, None) => return invalid("a mixed scenario needs `defect` or `weights`"),
            };
            fp.dims.insert("per_branch".into(), n);
            run_qd_mixed(&profile, &weights, s.electron.pair(), &times)?
        }
        Scenario::QdThermal(s) => {
            let series = run_qd_thermal(&profile, s.k_mean, s.electron.pair(), &times)?;
            fp.dims.insert("full".into(), 1usize << (n + 1));
            series
        }
    };
    Ok(RunOutput { series, fingerprint: fp, residuals })
}

/// Rows needed to resolve the requested chain states under the exact engine.
fn chain_rows(obs: &[ObservableSpec]) -> usize {
    obs.iter()
        .filter_map(|o| match o {
            ObservableSpec::StatePopulation { labels, .. } => labels.iter().map(|l| l.row).max(),
            _ => None,
        })
        .max()
        .unwrap_or(1)
}

/// Exact-engine twin of an effective-engine scenario.
fn exact_twin(cfg: &ScenarioConfig) -> Result<ScenarioConfig> {
    let mut exact = cfg.clone();
    match &mut exact.scenario {
        Scenario::Itc(s) => match s.engine {
            ItcEngine::Effective { .. } => s.engine = ItcEngine::Exact,
            ItcEngine::Exact => return invalid("compare needs an effective engine in the config"),
        },
        Scenario::QdDefect(s) => match s.engine {
            DefectEngineSpec::Effective { .. } => s.engine = DefectEngineSpec::Exact,
            DefectEngineSpec::Exact => return invalid("compare needs an effective engine in the config"),
        },
        other => return invalid(format!("compare is not available for {} scenarios", scenario_name(other))),
    }
    Ok(exact)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnError {
    pub column: String,
    pub max_abs_error: f64,
    pub mean_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareSummary {
    /// `{"exact": …, "effective": …}`.
    pub dims: BTreeMap<String, usize>,
    pub errors: Vec<ColumnError>,
}

#[derive(Debug, Clone)]
pub struct CompareOutput {
    /// `{name}_exact`, `{name}_effective`, `{name}_abs_error` per observable.
    pub series: TimeSeries,
    pub summary: CompareSummary,
    pub effective: RunOutput,
    pub exact: RunOutput,
}

/// Runs the effective engine and the exact engine on the same grid.
pub fn compare(cfg: &ScenarioConfig) -> Result<CompareOutput> {
    let twin = exact_twin(cfg)?;
    let (effective, exact) = rayon::join(|| execute(cfg), || execute(&twin));
    let (effective, exact) = (effective?, exact?);
    let mut series = TimeSeries::new(effective.series.times().to_vec())?;
    let mut errors = Vec::new();
    for (name, eff) in effective.series.columns() {
        let ex = exact.series.column(name).expect("same observables");
        let err: Vec<f64> = ex.iter().zip(eff).map(|(a, b)| (a - b).abs()).collect();
        errors.push(ColumnError {
            column: name.clone(),
            max_abs_error: err.iter().copied().fold(0.0, f64::max),
            mean_abs_error: err.iter().sum::<f64>() / err.len().max(1) as f64,
        });
        series.push(format!("{name}_exact"), ex.to_vec())?;
        series.push(format!("{name}_effective"), eff.clone())?;
        series.push(format!("{name}_abs_error"), err)?;
    }
    let dim = |r: &RunOutput| r.fingerprint.dims.values().next().copied().unwrap_or(0);
    let dims = BTreeMap::from([("exact".to_string(), dim(&exact)), ("effective".to_string(), dim(&effective))]);
    let summary = CompareSummary { dims, errors };
    Ok(CompareOutput { series, summary, effective, exact })
}

/// Scalar digest of one run, used as a sweep row.
pub fn summarize(out: &RunOutput) -> Vec<(String, f64)> {
    let mut row = Vec::new();
    if let Some(d) = out.fingerprint.dims.values().next() {
        row.push(("dim".to_string(), *d as f64));
    }
    if let Some(t) = out.fingerprint.transfer_time {
        row.push(("tau".to_string(), t));
    }
    let s = &out.series;
    if s.len() == 1 {
        for (name, v) in s.columns() {
            row.push((name.clone(), v[0]));
        }
        return row;
    }
    for (name, v) in s.columns() {
        row.push((format!("min_{name}"), v.iter().copied().fold(f64::INFINITY, f64::min)));
        row.push((format!("max_{name}"), v.iter().copied().fold(f64::NEG_INFINITY, f64::max)));
    }
    if let Some(p) = s.column("P_up") {
        row.push(("contrast".to_string(), rabi_contrast(s.times(), p).unwrap_or(f64::NAN)));
    }
    row
}

/// One sweep: the axis values and a digest per value.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub rows: Vec<Vec<(String, f64)>>,
    pub fingerprints: Vec<Fingerprint>,
}

impl SweepOutput {
    /// Union of row keys in first-seen order.
    pub fn header(&self) -> Vec<String> {
        let mut keys: Vec<String> = Vec::new();
        for r in &self.rows {
            for (k, _) in r {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
        }
        keys
    }

    /// CSV with the axis as first column; missing entries are `NaN`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        let keys = self.header();
        let mut line = csv_field(self.axis.name());
        for k in &keys {
            line.push(',');
            line.push_str(&csv_field(k));
        }
        writeln!(out, "{line}")?;
        for (v, r) in self.values.iter().zip(&self.rows) {
            let mut line = fmt_f64(*v);
            for k in &keys {
                let x = r.iter().find(|(name, _)| name == k).map_or(f64::NAN, |(_, x)| *x);
                line.push(',');
                line.push_str(&fmt_f64(x));
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Re-runs the scenario for each axis value. A `max_row` sweep over an
/// effective engine also reports the worst deviation from the exact engine.
pub fn sweep(cfg: &ScenarioConfig, axis: SweepAxis, values: &[f64]) -> Result<SweepOutput> {
    if values.is_empty() {
        return invalid("a sweep needs at least one value");
    }
    let configs = values.iter().map(|&v| cfg.with_axis(axis, v)).collect::<Result<Vec<_>>>()?;
    let exact = if axis == SweepAxis::MaxRow { Some(execute(&exact_twin(cfg)?)?) } else { None };
    let outs = configs.par_iter().map(execute).collect::<Result<Vec<_>>>()?;
    let rows = outs
        .iter()
        .map(|o| {
            let mut row = summarize(o);
            if let Some(ex) = &exact {
                for (name, eff) in o.series.columns() {
                    let e = ex.series.column(name).expect("same observables");
                    let worst = e.iter().zip(eff).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    row.push((format!("max_abs_error_{name}"), worst));
                }
            }
            row
        })
        .collect();
    Ok(SweepOutput {
        axis,
        values: values.to_vec(),
        rows,
        fingerprints: outs.into_iter().map(|o| o.fingerprint).collect(),
    })
}
