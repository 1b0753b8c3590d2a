//! Zero modes of the 3D hedgehog operator against the Dirac corner index.
//!
//! Usage: `cargo run --release --example hedgehog_index -- [k] [R] [N] [lambda]`

use std::sync::Arc;
use std::time::Instant;

use callias::analytic::{analytic_index, assemble_hedgehog_3d, SolverParams};
use callias::geometry::build_sphere_grid;
use callias::symbolic::models::Hedgehog;
use callias::topo::model_dirac_index;

fn main() -> callias::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let arg = |i: usize, d: f64| args.get(i).copied().unwrap_or(d);
    let (k, radius, points, lambda) = (
        arg(0, 1.0) as i32,
        arg(1, 12.0),
        arg(2, 16.0) as usize,
        arg(3, 1.0),
    );

    let start = Instant::now();
    let op = assemble_hedgehog_3d(k, &f64::tanh, radius, points, lambda)?;
    let (index, report) = analytic_index(&op, &SolverParams::default())?;
    println!(
        "{} ({} unknowns, Wilson r = {:.3})",
        op.name,
        op.dim(),
        op.wilson
    );
    for s in [&report.p, &report.p_dagger] {
        println!(
            "  {:<2} sigma = {:.3?}  matvecs = {}",
            s.side.label(),
            s.values,
            s.matvecs
        );
    }
    println!(
        "  near-zero = {}, interior weights P {:.4?} / P† {:.4?}, gap ratio {:?}",
        report.zero_cut,
        report.p_count.interior_weights,
        report.p_dagger_count.interior_weights,
        report.gap_ratio
    );
    println!(
        "  analytic index = {index}  ({:.1} s)",
        start.elapsed().as_secs_f64()
    );

    let model = Hedgehog { charge: k, lambda };
    let topo = model_dirac_index(&model, Arc::new(build_sphere_grid(24)?), 1e-10)?;
    println!(
        "  topological index = {} (raw Chern {:.6})",
        topo.index, topo.chern_raw
    );
    Ok(())
}
