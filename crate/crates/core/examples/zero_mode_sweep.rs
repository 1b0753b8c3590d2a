//! Convergence sweep of the kink index over grid resolutions, with the
//! zero mode written as CSV.
//!
//! Usage: `cargo run --release --example zero_mode_sweep -- [out.csv]`

use std::fs::File;

use callias::analytic::{
    analytic_index, assemble_kink_1d, convergence_sweep, write_zero_modes_csv, SolverParams,
};

fn main() -> callias::Result<()> {
    let params = SolverParams::default();
    let build = |n: usize| assemble_kink_1d(&f64::tanh, 20.0, n);
    for p in convergence_sweep(&build, &[250, 500, 1000, 2000, 4000], &params)? {
        println!(
            "N = {:>5}: index {:?}, gap ratio {:.3e}",
            p.resolution,
            p.index,
            p.gap_ratio.unwrap_or(f64::NAN)
        );
    }
    if let Some(path) = std::env::args().nth(1) {
        let op = build(2000)?;
        let (_, report) = analytic_index(&op, &params)?;
        let file = File::create(&path).unwrap_or_else(|e| panic!("cannot create {path}: {e}"));
        write_zero_modes_csv(&op, &report, file)?;
        println!("wrote {path}");
    }
    Ok(())
}
