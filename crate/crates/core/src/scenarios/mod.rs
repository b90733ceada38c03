//! Experiment runners: initial states, engines and observables bound into
//! time series.

pub mod central;
pub mod config;
pub mod defect;
pub mod itc;
pub mod memory;
pub mod mixed;
pub mod runner;
pub mod series;

pub use central::{analytic_three_state, run_qd_defect, transfer_time, BranchSet, DefectEngine, DefectRun, SpinBranch};
pub use defect::DefectDistribution;
pub use series::{TimeGrid, TimeSeries};
pub use memory::{corrected_channel, memory_cycle, MemoryChannel};
pub use mixed::{run_qd_mixed, run_qd_thermal};
pub use itc::{run_itc, ItcEngine, ItcRun};
pub use config::{ScenarioConfig, SweepAxis};
pub use runner::{compare, execute, sweep, CompareOutput, RunOutput, SweepOutput};
