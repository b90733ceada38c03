//! Sweeps the defect position of a memory scenario and prints the CSV.

use effdyn::scenarios::config::parse_values;
use effdyn::scenarios::{sweep, ScenarioConfig, SweepAxis};

fn main() -> effdyn::Result<()> {
    let cfg = ScenarioConfig::from_json(
        r#"{ "schema_version": 1,
             "scenario": { "kind": "qd_memory",
               "profile": { "kind": "gaussian_dot", "n": 100, "params": { "A": 1.0, "r0": 1.0 } },
               "defect": { "kind": "lorentzian", "j0": 100, "Gamma": 2.0 } } }"#,
    )?;
    let values = parse_values("1, N/4, N/2, 3N/4, N", 100)?;
    print!("{}", sweep(&cfg, SweepAxis::J0, &values)?.to_csv_string());
    Ok(())
}
