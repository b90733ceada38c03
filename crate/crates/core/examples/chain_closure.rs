//! How much of |↑⟩ ⊗ (uniform defect) stays in the first four chain states,
//! with a 4-state and a 12-state truncation.

use effdyn::chain::ChainLabel;
use effdyn::observables::ObservableSpec;
use effdyn::profile::{make_profile, ProfileKind, ProfileParams};
use effdyn::scenarios::{run_qd_defect, transfer_time, DefectDistribution, DefectEngine};
use num_complex::Complex64 as C64;

fn main() -> effdyn::Result<()> {
    let params: ProfileParams = [("A".to_string(), 1.0), ("r0".to_string(), 1.0)].into_iter().collect();
    let profile = make_profile(ProfileKind::GaussianDot, 1000, &params)?;
    let tau = transfer_time(&profile);
    let labels = [(1, 1), (1, 2), (2, 1), (2, 2)].map(|(row, col)| ChainLabel { row, col }).to_vec();
    let obs = [ObservableSpec::StatePopulation { labels, name: Some("P_T".into()) }];
    let times: Vec<f64> = (0..=8).map(|k| 0.25 * tau * k as f64).collect();
    let up = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    println!("τ = {tau:.2}");
    for rows in [2, 6] {
        let r = run_qd_defect(&profile, &DefectDistribution::Uniform, up, DefectEngine::Effective { max_row: rows }, &obs, &times, rows)?;
        let p = r.series.column("P_T").unwrap();
        println!("{:>2} states: {}", r.dim, p.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" "));
    }
    Ok(())
}
