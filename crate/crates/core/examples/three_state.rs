//! Closed-form evolution of |↓⟩ ⊗ (one nuclear defect) for a thousand-spin dot.

use effdyn::profile::{make_profile, ProfileKind, ProfileParams};
use effdyn::scenarios::{analytic_three_state, transfer_time, DefectDistribution};

fn main() -> effdyn::Result<()> {
    let params: ProfileParams = [("A".to_string(), 1.0), ("r0".to_string(), 1.0)].into_iter().collect();
    let profile = make_profile(ProfileKind::GaussianDot, 1000, &params)?;
    let tau = transfer_time(&profile);
    let times: Vec<f64> = (0..=8).map(|k| 0.25 * tau * k as f64).collect();
    for defect in [DefectDistribution::Uniform, DefectDistribution::Lorentzian { j0: 1, gamma: 20.0 }] {
        let s = analytic_three_state(&profile, &defect, &times)?;
        println!("{defect:?}");
        for (i, t) in times.iter().enumerate() {
            println!("  t/τ = {:.2}: P↓ = {:.5}, tangle = {:.5}", t / tau, s.column("P_down").unwrap()[i], s.column("tangle").unwrap()[i]);
        }
    }
    Ok(())
}
