//! Ground-state population of six atoms in a coherent field: effective
//! chain against the full 2^N × 7 space.

use effdyn::observables::ObservableSpec;
use effdyn::profile::{make_profile, ProfileKind, ProfileParams};
use effdyn::scenarios::{run_itc, ItcEngine};

fn main() -> effdyn::Result<()> {
    let params: ProfileParams = [("g".to_string(), 1.0)].into_iter().collect();
    let profile = make_profile(ProfileKind::SineCavity, 6, &params)?;
    let times: Vec<f64> = (0..=50).map(|k| 0.5 * k as f64).collect();
    let obs = [ObservableSpec::ground()];
    let exact = run_itc(&profile, 1.8, Some(7), ItcEngine::Exact, &obs, &times)?;
    let eff = run_itc(&profile, 1.8, Some(7), ItcEngine::Effective { max_row: 2, max_col: None }, &obs, &times)?;
    println!("dimension {} -> {}", exact.dim, eff.dim);
    println!("{:>6} {:>10} {:>10}", "gt", "exact", "effective");
    let (a, b) = (exact.series.column("P0").unwrap(), eff.series.column("P0").unwrap());
    for i in (0..times.len()).step_by(5) {
        println!("{:>6.1} {:>10.5} {:>10.5}", times[i], a[i], b[i]);
    }
    Ok(())
}
