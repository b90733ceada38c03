//! Electron Rabi oscillations against an incoherent one-defect mixture.

use effdyn::profile::{make_profile, ProfileKind, ProfileParams};
use effdyn::scenarios::{run_qd_mixed, transfer_time, DefectDistribution};
use effdyn::observables::rabi_contrast;
use num_complex::Complex64 as C64;

fn main() -> effdyn::Result<()> {
    let n = 40;
    let params: ProfileParams = [("A".to_string(), 1.0), ("r0".to_string(), 1.0)].into_iter().collect();
    let profile = make_profile(ProfileKind::GaussianDot, n, &params)?;
    let tau = transfer_time(&profile);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = (C64::new(s, 0.0), C64::new(s, 0.0));
    let times: Vec<f64> = (0..=800).map(|k| 8.0 * tau * k as f64 / 800.0).collect();
    for (name, d) in [
        ("uniform", DefectDistribution::Uniform),
        ("centre", DefectDistribution::Lorentzian { j0: 1, gamma: n as f64 }),
        ("edge", DefectDistribution::Lorentzian { j0: n, gamma: n as f64 }),
    ] {
        let r = run_qd_mixed(&profile, &d.weights(n)?, plus, &times)?;
        let p = r.column("P_up").unwrap();
        println!("{name:>8}: contrast {:.4}", rabi_contrast(&times, p)?);
    }
    Ok(())
}
