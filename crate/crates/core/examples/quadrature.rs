//! Field quadrature fluctuations for inhomogeneous couplings and for
//! homogeneous couplings with the same collective strength.

use effdyn::observables::ObservableSpec;
use effdyn::profile::{make_profile, ProfileKind, ProfileParams};
use effdyn::scenarios::{run_itc, ItcEngine};

fn main() -> effdyn::Result<()> {
    let params: ProfileParams = [("g".to_string(), 1.0)].into_iter().collect();
    let inhom = make_profile(ProfileKind::SineCavity, 8, &params)?;
    let hom = inhom.matched_homogeneous();
    let times: Vec<f64> = (0..=300).map(|k| 0.1 * k as f64).collect();
    let obs = [ObservableSpec::QuadratureVariance];
    let engine = ItcEngine::Effective { max_row: 3, max_col: None };
    for (name, p) in [("inhomogeneous", &inhom), ("homogeneous", &hom)] {
        let run = run_itc(p, 1.0, Some(16), engine, &obs, &times)?;
        let v = run.series.column("dX1_sq").unwrap();
        let (i, peak) = v.iter().copied().enumerate().fold((0, 0.0), |m, x| if x.1 > m.1 { x } else { m });
        println!("{name:>14}: (ΔX1)² starts at {:.4}, peaks at {peak:.4} (gt = {:.1})", v[0], times[i]);
    }
    Ok(())
}
