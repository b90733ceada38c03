//! Runs a scenario file and prints the first rows of its CSV.
//!
//! `cargo run --example run_config -- presets/fig2.json`

use effdyn::scenarios::{execute, ScenarioConfig};

fn main() -> effdyn::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "presets/fig2.json".into());
    let cfg = ScenarioConfig::load(path.as_ref())?;
    let out = execute(&cfg)?;
    println!("{}", serde_json::to_string(&out.fingerprint)?);
    for line in out.series.to_csv_string().lines().take(6) {
        println!("{line}");
    }
    Ok(())
}
