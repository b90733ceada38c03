//! Population leaking out of the first chain row as the atom number grows.

use effdyn::observables::ObservableSpec;
use effdyn::profile::{make_profile, ProfileKind, ProfileParams};
use effdyn::scenarios::{run_itc, ItcEngine};

fn main() -> effdyn::Result<()> {
    let params: ProfileParams = [("g".to_string(), 1.0)].into_iter().collect();
    let times: Vec<f64> = (0..=250).map(|k| 0.1 * k as f64).collect();
    let obs = [ObservableSpec::RowPopulation { rows: vec![2, 3] }];
    for n in [6, 8, 10, 12, 16] {
        let profile = make_profile(ProfileKind::SineCavity, n, &params)?;
        let run = run_itc(&profile, 1.8, Some(16), ItcEngine::Effective { max_row: 3, max_col: None }, &obs, &times)?;
        let peak = run.series.column("P_rows_2_3").unwrap().iter().copied().fold(0.0, f64::max);
        println!("N = {n:>2}: max P(rows 2,3) = {peak:.4}  (effective dim {})", run.dim);
    }
    Ok(())
}
