//! Electron–nuclei entanglement for a uniform and an edge-peaked defect.

use effdyn::observables::{ObservableSpec, Spin};
use effdyn::profile::{make_profile, ProfileKind, ProfileParams};
use effdyn::scenarios::{run_qd_defect, transfer_time, DefectDistribution, DefectEngine};
use num_complex::Complex64 as C64;

fn main() -> effdyn::Result<()> {
    let params: ProfileParams = [("A".to_string(), 1.0), ("r0".to_string(), 1.0)].into_iter().collect();
    let profile = make_profile(ProfileKind::GaussianDot, 1000, &params)?;
    let tau = transfer_time(&profile);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = (C64::new(s, 0.0), C64::new(s, 0.0));
    let obs = [ObservableSpec::Tangle, ObservableSpec::ElectronPopulation { spin: Spin::Down }];
    let times: Vec<f64> = (0..=300).map(|k| 2.0 * tau * k as f64 / 300.0).collect();
    for defect in [DefectDistribution::Uniform, DefectDistribution::Lorentzian { j0: 1000, gamma: 20.0 }] {
        let r = run_qd_defect(&profile, &defect, plus, DefectEngine::Effective { max_row: 6 }, &obs, &times, 6)?;
        let tg = r.series.column("tangle").unwrap();
        let (i, m) = tg.iter().copied().enumerate().skip(75).fold((0, f64::INFINITY), |a, x| if x.1 < a.1 { x } else { a });
        println!("{defect:?}: least entangled after τ/2 at t = {:.1} ({:.2} τ), tangle {m:.4}", times[i], times[i] / tau);
    }
    Ok(())
}
