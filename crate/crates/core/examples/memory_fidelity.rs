//! Write–store–read fidelity of the nuclear memory as the defect moves from
//! the dot centre to its edge.

use effdyn::profile::{make_profile, ProfileKind, ProfileParams};
use effdyn::scenarios::{corrected_channel, transfer_time, DefectDistribution};

fn main() -> effdyn::Result<()> {
    let n = 200;
    let params: ProfileParams = [("A".to_string(), 1.0), ("r0".to_string(), 1.0)].into_iter().collect();
    let profile = make_profile(ProfileKind::GaussianDot, n, &params)?;
    let tau = transfer_time(&profile);
    let clean = corrected_channel(&profile, None, tau, 8)?;
    println!("no defect: F = {:.5}", clean.average_fidelity(200)?);
    for j0 in [1, n / 4, n / 2, 3 * n / 4, n] {
        let d = DefectDistribution::Lorentzian { j0, gamma: n as f64 / 50.0 };
        let ch = corrected_channel(&profile, Some(&d), tau, 8)?;
        println!("j0 = {j0:>3}: F = {:.5}", ch.average_fidelity(200)?);
    }
    Ok(())
}
