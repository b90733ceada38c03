//! Rabi contrast of the electron against ten thermal nuclear spins.

use effdyn::observables::rabi_contrast;
use effdyn::profile::{make_profile, ProfileKind, ProfileParams};
use effdyn::scenarios::{run_qd_thermal, transfer_time};
use num_complex::Complex64 as C64;

fn main() -> effdyn::Result<()> {
    let params: ProfileParams = [("A".to_string(), 1.0), ("r0".to_string(), 1.0)].into_iter().collect();
    let profile = make_profile(ProfileKind::GaussianDot, 10, &params)?;
    let tau = transfer_time(&profile);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = (C64::new(s, 0.0), C64::new(s, 0.0));
    let times: Vec<f64> = (0..=800).map(|k| 8.0 * tau * k as f64 / 800.0).collect();
    for k in [0.0, 0.01, 0.02, 0.05, 0.1] {
        let r = run_qd_thermal(&profile, k, plus, &times)?;
        println!("⟨k⟩ = {k:.2}: contrast {:.4}", rabi_contrast(&times, r.column("P_up").unwrap())?);
    }
    Ok(())
}
