//! Clutching decomposition of the jointly positive eigenbundle over the
//! hedgehog sphere and the synthetic circle boundary.
//!
//! Usage: `cargo run --release --example clutching`

use std::sync::Arc;

use callias::geometry::{build_circle_grid, build_sphere_grid};
use callias::symbolic::models::{Hedgehog, SyntheticDiracCircle};
use callias::topo::{clifford_from_model, verify_clutching_decomposition};

fn main() -> callias::Result<()> {
    for k in 0..=2 {
        let model = Hedgehog {
            charge: k,
            lambda: 1.0,
        };
        let cliff = clifford_from_model(&model, Arc::new(build_sphere_grid(24)?))?;
        let r = verify_clutching_decomposition(&model, &cliff, None, 1e-8)?;
        println!(
            "hedgehog k={k}: angles {:.1e}/{:.1e}, c1(V0+) {:?} + c1(V1+) {:?} = c1(F+) {:?}",
            r.max_inward_angle,
            r.max_outward_angle,
            r.chern_v0_plus,
            r.chern_v1_plus,
            r.chern_f_plus
        );
    }
    let fiber = build_circle_grid(48)?;
    for k in -2..=2 {
        let model = SyntheticDiracCircle {
            winding: k,
            trivial: false,
        };
        let cliff = clifford_from_model(&model, Arc::new(build_circle_grid(48)?))?;
        let r = verify_clutching_decomposition(&model, &cliff, Some(&fiber), 1e-8)?;
        println!(
            "circle k={k:+}: seam windings {:?}, c1(V++) {:?}, identity {:?}, passed {}",
            r.seam_windings, r.corner_chern, r.identity, r.passed
        );
    }
    Ok(())
}
