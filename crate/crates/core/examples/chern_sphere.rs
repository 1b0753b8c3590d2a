//! Lattice Chern numbers of spin eigenlines over refined sphere grids.
//!
//! Usage: `cargo run --release --example chern_sphere -- [max degree]`

use std::sync::Arc;

use callias::geometry::build_sphere_grid;
use callias::linalg::{eigh, pauli_dot, select_columns};
use callias::symbolic::models::hedgehog_direction;
use callias::topo::{fhs_chern_number, BundleFrameField};

fn main() -> callias::Result<()> {
    let max_degree: i32 = std::env::args()
        .nth(1)
        .map_or(2, |a| a.parse().expect("integer degree"));
    println!(
        "{:>6} {:>5} {:>6} {:>10}",
        "degree", "edge", "sign", "c1 (raw)"
    );
    for k in 0..=max_degree {
        for n in [12, 24, 48] {
            let grid = Arc::new(build_sphere_grid(n)?);
            for sign in [1.0, -1.0] {
                let frames = grid
                    .points
                    .iter()
                    .map(|p| {
                        let (vals, vecs) = eigh(&pauli_dot(hedgehog_direction(k, &p.coords)));
                        select_columns(&vecs, |j| vals[j] * sign > 0.0)
                    })
                    .collect();
                let ch = fhs_chern_number(&BundleFrameField::new(grid.clone(), frames)?)?;
                println!(
                    "{k:>6} {n:>5} {sign:>+6} {:>3} ({:+.6})",
                    ch.integer, ch.raw
                );
            }
        }
    }
    Ok(())
}
