//! Zero mode of the 1D kink operator against the 0D corner formula.
//!
//! Usage: `cargo run --release --example kink_index -- [L] [N] [orientation]`

use std::sync::Arc;

use callias::analytic::{analytic_index, assemble_kink_1d, SolverParams};
use callias::geometry::build_interval_boundary;
use callias::symbolic::models::Kink1d;
use callias::symbolic::{corner_fields, joint_split, CalliasSymbolData, SymbolGrid};
use callias::topo::corner_index_0d;

fn main() -> callias::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let arg = |i: usize, d: f64| args.get(i).copied().unwrap_or(d);
    let (extent, points, o) = (arg(0, 20.0), arg(1, 2000.0) as usize, arg(2, 1.0).signum());

    let op = assemble_kink_1d(&|t| o * t.tanh(), extent, points)?;
    let (index, report) = analytic_index(&op, &SolverParams::default())?;
    println!("{}: smallest singular values", op.name);
    for s in [&report.p, &report.p_dagger] {
        println!("  {:<2} {:.3?}", s.side.label(), s.values);
    }
    println!(
        "analytic index = {index} (gap ratio {:?})",
        report.gap_ratio
    );

    let model = Kink1d { left: -o, right: o };
    let grid = SymbolGrid::new(1, build_interval_boundary(), build_interval_boundary(), 33)?;
    let data = CalliasSymbolData::sample(&model, Arc::new(grid))?;
    let (a, b) = corner_fields(&data)?;
    let split = joint_split(Arc::new(data.grid.corner_grid()), &a, &b, 1e-8)?;
    println!("corner index   = {}", corner_index_0d(&split)?);
    Ok(())
}
