//! Builds the collective-state chain for six sine-coupled atoms and shows
//! which candidates were kept, found dependent, or cut off.

use effdyn::chain::{build_effective_basis, Model};
use effdyn::profile::{make_profile, ProfileKind, ProfileParams};

fn main() -> effdyn::Result<()> {
    let params: ProfileParams = [("g".to_string(), 1.0)].into_iter().collect();
    let profile = make_profile(ProfileKind::SineCavity, 6, &params)?;
    let basis = build_effective_basis(&profile, Model::Itc, 6, 2)?;
    println!("{} chain states, orthonormality defect {:.1e}", basis.len(), basis.orthonormality_defect());
    for col in 0..=6 {
        println!("  column {col}: {} rows", basis.rows_in_col(col));
    }
    for r in basis.residual_log() {
        println!("  discarded r{}c{}: relative residual {:.3e} ({:?})", r.label.row, r.label.col, r.relative, r.reason);
    }
    Ok(())
}
